// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// anything fails. Expected values come from independent oracles computed
// here, never from the code under test.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eqasm/bits.hpp"
#include "eqasm/codec.hpp"
#include "eqasm/disasm.hpp"
#include "eqasm/frontend.hpp"
#include "eqasm/vm.hpp"
#include "oracles.hpp"

using namespace eqasm;

namespace {

int g_failures = 0;

void report(int n, const std::string &name, bool ok,
            const std::string &detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", n,
                name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok)
        ++g_failures;
}

const std::string kRoot = EQASM_SOURCE_DIR;
const std::string kTool = EQASM_TOOL;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const OpcodeMap &sim_map() {
    static const OpcodeMap map =
        OpcodeMap::parse_qmap(default_sim_qmap_text());
    return map;
}

const GateSemantics &sim_gates() {
    static const GateSemantics gates =
        GateSemantics::parse(default_gate_semantics_text(), sim_map());
    return gates;
}

const Topology &topo() {
    static const Topology t = Topology::default_topology();
    return t;
}

Machine vm_for(const std::vector<std::uint32_t> &words, VmOptions opts) {
    return Machine(words, sim_gates(), topo(), opts, &sim_map());
}

// ---------------------------------------------------------------------------

void criterion_1_encoding_goldens() {
    bool ok = true;
    const auto check = [&](std::uint32_t oracle_word, std::uint32_t golden,
                           const Instruction &instr) {
        ok = ok && oracle_word == golden && encode(instr) == golden;
    };
    check(oracle::pack_nop(), 0x00000000u, ins::Nop{});
    check(oracle::pack_add(1, 2, 3), 0x3C110C00u,
          ins::Alu{ins::AluOp::Add, 1, 2, 3});
    check(oracle::pack_ldi(0, -1), 0x2C0FFFFFu, ins::Ldi{0, -1});
    check(oracle::pack_br(2, 0), 0x02000020u, ins::Br{CompFlag::Always, 2});
    check(oracle::pack_bundle_word(1, 0x009, 0, 0x00A, 1), 0x82400A09u,
          ins::BundleWord{1, {0x009, 0}, {0x00A, 1}});
    report(1, "encoding goldens against the bit-packing oracle", ok);
}

void criterion_2_roundtrip() {
    std::mt19937_64 rng(0xC0DEC);
    std::set<std::size_t> variants;
    std::set<int> alu_ops;
    int bundles = 0;
    bool ok = true;
    const int kIterations = 12000;
    for (int i = 0; i < kIterations; ++i) {
        const Instruction instr = oracle::random_instruction(rng);
        variants.insert(instr.index());
        if (const auto *alu = std::get_if<ins::Alu>(&instr))
            alu_ops.insert(static_cast<int>(alu->op));
        if (std::holds_alternative<ins::BundleWord>(instr))
            ++bundles;
        if (!(decode(encode(instr), DecodeMode::Strict) == instr)) {
            ok = false;
            break;
        }
    }
    // all 17 variants (the Alu variant covers five mnemonics) plus bundles
    ok = ok && variants.size() == std::variant_size_v<Instruction> &&
         alu_ops.size() == 5 && bundles > 0;
    report(2, "decode(encode(i)) == i over " + std::to_string(kIterations) +
                  " randomized instructions",
           ok);
}

void criterion_3_helpers() {
    bool ok = true;
    const auto to_vec = [](const BitString &b) {
        oracle::BitVec v(static_cast<std::size_t>(b.width()));
        for (int i = 0; i < b.width(); ++i)
            v[static_cast<std::size_t>(i)] = b.bit(i) ? 1 : 0;
        return v;
    };

    for (int n = 1; n <= 12 && ok; ++n) {
        for (std::int64_t v = 0; v < (std::int64_t(1) << n) && ok; ++v) {
            const auto b =
                BitString::from_uint(static_cast<std::uint64_t>(v), n);
            ok = to_vec(b) == oracle::to_ubits(v, n) &&
                 b.uint_value(n) ==
                     static_cast<std::uint64_t>(oracle::uint_of(to_vec(b), n)) &&
                 b.sint_value(n) == oracle::sint_of(to_vec(b), n);
        }
        for (std::int64_t v = -(std::int64_t(1) << (n - 1));
             v < (std::int64_t(1) << (n - 1)) && ok; ++v)
            ok = to_vec(BitString::from_sint(v, n)) == oracle::to_sbits(v, n);
    }

    std::mt19937_64 rng(303);
    for (int iter = 0; iter < 20000 && ok; ++iter) {
        const int n = 1 + static_cast<int>(rng() % 32);
        const std::uint64_t v = rng() % (std::uint64_t(1) << n);
        const auto b = BitString::from_uint(v, n);
        const auto vec = to_vec(b);
        const int m = 1 + static_cast<int>(rng() % n);
        ok = b.uint_value(m) ==
                 static_cast<std::uint64_t>(oracle::uint_of(vec, m)) &&
             b.sint_value(m) == oracle::sint_of(vec, m);
        const int wider = n + static_cast<int>(rng() % (33 - n));
        if (ok && wider > n)
            ok = to_vec(b.zero_extend(wider)) == oracle::zero_ext(vec, wider) &&
                 to_vec(b.sign_extend(wider)) == oracle::sign_ext(vec, wider);
    }
    report(3, "numeric helpers match the pseudo-code transcription "
              "(exhaustive <=12, random <=32)",
           ok);
}

void criterion_4_cmp_truth_table() {
    const std::vector<std::uint32_t> image = {encode(ins::Cmp{1, 2}),
                                              encode(ins::Stop{})};
    VmOptions opts;
    opts.data_memory_size = 4096;

    bool ok = true;
    const auto check_pair = [&](std::uint32_t rs, std::uint32_t rt) {
        auto m = vm_for(image, opts);
        m.set_gpr(1, rs);
        m.set_gpr(2, rt);
        m.run();
        const auto s = static_cast<std::int32_t>(rs);
        const auto t = static_cast<std::int32_t>(rt);
        ok = ok && m.comp_flag(CompFlag::Always) && !m.comp_flag(CompFlag::Never) &&
             m.comp_flag(CompFlag::Eq) == (rt == rs) &&
             m.comp_flag(CompFlag::Ne) == (rt != rs) &&
             m.comp_flag(CompFlag::Ltu) == (rt < rs) &&
             m.comp_flag(CompFlag::Geu) == (rt >= rs) &&
             m.comp_flag(CompFlag::Leu) == (rt <= rs) &&
             m.comp_flag(CompFlag::Gtu) == (rt > rs) &&
             m.comp_flag(CompFlag::Lt) == (t < s) &&
             m.comp_flag(CompFlag::Ge) == (t >= s) &&
             m.comp_flag(CompFlag::Le) == (t <= s) &&
             m.comp_flag(CompFlag::Gt) == (t > s);
        // exclusive pairs
        ok = ok && (m.comp_flag(CompFlag::Eq) ^ m.comp_flag(CompFlag::Ne)) &&
             (m.comp_flag(CompFlag::Ltu) ^ m.comp_flag(CompFlag::Geu)) &&
             (m.comp_flag(CompFlag::Leu) ^ m.comp_flag(CompFlag::Gtu)) &&
             (m.comp_flag(CompFlag::Lt) ^ m.comp_flag(CompFlag::Ge)) &&
             (m.comp_flag(CompFlag::Le) ^ m.comp_flag(CompFlag::Gt));
    };

    const std::uint32_t boundary[] = {0u, 1u, 0x7FFFFFFFu, 0x80000000u,
                                      0xFFFFFFFFu};
    for (auto a : boundary)
        for (auto b : boundary)
            check_pair(a, b);

    std::mt19937_64 rng(4444);
    for (int i = 0; i < 10000 && ok; ++i)
        check_pair(static_cast<std::uint32_t>(rng()),
                   static_cast<std::uint32_t>(rng()));
    report(4, "CMP truth table on 10^4 samples plus 25 boundary pairs", ok);
}

void criterion_5_macros() {
    const std::pair<const char *, const char *> rows[] = {
        {"goto addr", "br always, addr"},
        {"brn addr", "br never, addr"},
        {"beq r1, r2, addr", "cmp r1, r2\nbr eq, addr"},
        {"bne r1, r2, addr", "cmp r1, r2\nbr ne, addr"},
        {"blt r1, r2, addr", "cmp r1, r2\nbr lt, addr"},
        {"ble r1, r2, addr", "cmp r1, r2\nbr le, addr"},
        {"bgt r1, r2, addr", "cmp r1, r2\nbr gt, addr"},
        {"bge r1, r2, addr", "cmp r1, r2\nbr ge, addr"},
        {"bltu r1, r2, addr", "cmp r1, r2\nbr ltu, addr"},
        {"bleu r1, r2, addr", "cmp r1, r2\nbr leu, addr"},
        {"bgtu r1, r2, addr", "cmp r1, r2\nbr gtu, addr"},
        {"bgeu r1, r2, addr", "cmp r1, r2\nbr geu, addr"},
        {"mov r3, r4", "ldi r3, 0\nadd r3, r4, r3"},
        {"shl1 r3, r4", "add r3, r4, r4"},
        {"mult2 r3, r4", "add r3, r4, r4"},
        {"nand r3, r4, r5", "and r3, r4, r5\nnot r3, r3"},
        {"nor r3, r4, r5", "or r3, r4, r5\nnot r3, r3"},
        {"xnor r3, r4, r5", "xor r3, r4, r5\nnot r3, r3"},
    };
    bool ok = true;
    int count = 0;
    for (const auto &[macro_text, expansion_text] : rows) {
        const auto expanded = expand_macros(parse_program(tokenize(macro_text)));
        ok = ok && expanded.same(parse_program(tokenize(expansion_text)));
        ++count;
    }
    ok = ok && count == 18;

    // BLTU against both its hand-assembled expansion and the predicate.
    VmOptions opts;
    opts.data_memory_size = 4096;
    const auto macro_words = assemble(
        "bltu r1, r2, skip\nldi r3, 1\nskip: stop\n", sim_map(), topo()).words;
    const std::vector<std::uint32_t> manual_words = {
        encode(ins::Cmp{1, 2}), encode(ins::Br{CompFlag::Ltu, 2}),
        encode(ins::Ldi{3, 1}), encode(ins::Stop{})};
    ok = ok && macro_words == manual_words;

    std::mt19937_64 rng(555);
    for (int i = 0; i < 1000 && ok; ++i) {
        const auto a = static_cast<std::uint32_t>(rng());
        const auto b = static_cast<std::uint32_t>(rng());
        auto ma = vm_for(macro_words, opts);
        auto mb = vm_for(manual_words, opts);
        for (auto *m : {&ma, &mb}) {
            m->set_gpr(1, a);
            m->set_gpr(2, b);
            m->run();
        }
        ok = ok && ma.pc() == mb.pc() && ma.gpr(3) == mb.gpr(3) &&
             ma.gpr(3) == ((b < a) ? 0u : 1u);
    }
    report(5, "all 18 macro-table rows expand per the table; BLTU behaves "
              "like CMP+BR over 10^3 states",
           ok);
}

void criterion_6_qmap() {
    bool ok = true;
    std::string detail;
    try {
        const auto map = OpcodeMap::parse_qmap(
            read_file(kRoot + "/configs/qisa_opcodes.qmap"));
        // The printed listing contains 60 entries (see the project notes
        // on the published count).
        ok = ok && map.size() == 60;
        ok = ok && map.lookup("cw_01") && map.lookup("cw_01")->opcode == 0x9;
        ok = ok && map.lookup("measz") && map.lookup("measz")->opcode == 0x06;
        ok = ok && map.lookup("fl_cw_07") &&
             map.lookup("fl_cw_07")->opcode == 0x87 &&
             map.lookup("fl_cw_07")->kind == OpKind::Two;
        ok = ok && map.lookup("prepz")->opcode == 0x2;
        ok = ok && map.lookup("cw_31")->opcode == 0x27;
        ok = ok && map.lookup("c1_cw_06")->opcode == 0x2e;
        detail = "entries=" + std::to_string(map.size());
    } catch (const std::exception &e) {
        ok = false;
        detail = e.what();
    }
    try {
        OpcodeMap::parse_qmap("def_q_arg_st[\"too_big\"] = 512\n");
        ok = false;
        detail += "; opcode 512 was not rejected";
    } catch (const ConfigError &) {
        // expected
    }
    report(6, "reference qmap parses with the published values; opcode 512 "
              "rejected",
           ok, detail);
}

void criterion_7_linter() {
    const std::string source = read_file(kRoot + "/programs/feedback.qisa");

    const auto lint_text = [&](const std::string &text) {
        const auto resolved = resolve(
            expand_macros(parse_program(tokenize(text))), sim_map(), topo());
        return lint_latency(resolved, sim_gates()).size();
    };

    // Locate the two NOP lines: the first compensates the measurement,
    // the second the comparison.
    std::vector<std::string> lines;
    {
        std::istringstream in(source);
        std::string line;
        while (std::getline(in, line))
            lines.push_back(line);
    }
    std::vector<std::size_t> nop_lines;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::istringstream ls(lines[i]);
        std::string first;
        ls >> first;
        if (first == "NOP" || first == "nop")
            nop_lines.push_back(i);
    }

    bool ok = nop_lines.size() == 2;
    const auto without_line = [&](std::size_t skip) {
        std::string text;
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (i != skip)
                text += lines[i] + "\n";
        return text;
    };

    ok = ok && lint_text(source) == 0;
    ok = ok && lint_text(without_line(nop_lines[0])) == 1; // before FMR
    ok = ok && lint_text(without_line(nop_lines[1])) == 1; // before BR
    report(7, "latency linter: feedback program clean; one finding per "
              "removed compensation NOP",
           ok);
}

// Dense 4-dimensional state-vector oracle for the two-qubit Grover
// circuit, independent of the simulator implementation.
namespace grover_oracle {

using Vec4 = std::array<std::complex<double>, 4>;

Vec4 apply_y90_both(const Vec4 &v) {
    // y90 = (1/sqrt2) [[1, -1], [1, 1]], applied to both tensor factors.
    const double k = 0.5; // (1/sqrt2)^2
    Vec4 out{};
    const std::array<std::array<double, 2>, 2> a = {{{1, -1}, {1, 1}}};
    for (int r1 = 0; r1 < 2; ++r1)
        for (int r0 = 0; r0 < 2; ++r0)
            for (int c1 = 0; c1 < 2; ++c1)
                for (int c0 = 0; c0 < 2; ++c0)
                    out[static_cast<std::size_t>(2 * r1 + r0)] +=
                        k * a[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] *
                        a[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] *
                        v[static_cast<std::size_t>(2 * c1 + c0)];
    return out;
}

Vec4 flip_phase(Vec4 v, int index) {
    v[static_cast<std::size_t>(index)] = -v[static_cast<std::size_t>(index)];
    return v;
}

// Returns the deterministic measurement outcome (m_hi, m_lo), or (-1,-1)
// if the final state is not a basis state.
std::pair<int, int> predict(int marked) {
    Vec4 v{};
    v[0] = 1.0;
    v = apply_y90_both(v);
    v = flip_phase(v, marked);
    v = apply_y90_both(v);
    v = flip_phase(v, 0);
    v = apply_y90_both(v);
    for (int n = 0; n < 4; ++n)
        if (std::abs(std::abs(v[static_cast<std::size_t>(n)]) - 1.0) < 1e-9)
            return {n >> 1, n & 1};
    return {-1, -1};
}

} // namespace grover_oracle

void criterion_8_quantum_end_to_end() {
    bool ok = true;
    std::string detail;

    for (int marked = 0; marked < 4 && ok; ++marked) {
        const char *suffix[] = {"00", "01", "10", "11"};
        const auto words =
            assemble(read_file(kRoot + "/programs/grover_cu" +
                               suffix[marked] + ".qisa"),
                     sim_map(), topo())
                .words;
        const auto [want_hi, want_lo] = grover_oracle::predict(marked);
        if (want_hi != (marked >> 1) || want_lo != (marked & 1)) {
            ok = false;
            detail = "oracle did not predict a deterministic marked state";
            break;
        }
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            VmOptions opts;
            opts.seed = seed;
            opts.data_memory_size = 4096;
            auto m = vm_for(words, opts);
            if (m.run() != StopReason::Stopped) {
                ok = false;
                break;
            }
            if (m.gpr(1) == static_cast<std::uint32_t>(want_hi) &&
                m.gpr(2) == static_cast<std::uint32_t>(want_lo))
                ++hits;
        }
        ok = ok && hits == 100;
        if (!ok && detail.empty())
            detail = "marked state " + std::string(suffix[marked]) +
                     " hit only " + std::to_string(hits) + "/100";
    }

    if (ok) {
        const auto words = assemble(
            read_file(kRoot + "/programs/hadamard_stats.qisa"), sim_map(),
            topo()).words;
        VmOptions opts;
        opts.seed = 0;
        opts.data_memory_size = 4096;
        auto m = vm_for(words, opts);
        ok = m.run() == StopReason::Stopped;
        const std::uint32_t ones = m.gpr(3);
        ok = ok && ones >= 450 && ones <= 550 &&
             m.measurement_log().size() == 1000;
        detail = "grover 400/400 deterministic; hadamard ones=" +
                 std::to_string(ones) + "/1000";
    }
    report(8, "two-qubit Grover finds each marked state over 100 seeds; "
              "Born statistics land in [0.45,0.55]",
           ok, detail);
}

void criterion_9_timing() {
    const auto words = assemble("smis s0, {0}\nqwait 10000\n3, x s0\nstop\n",
                                sim_map(), topo()).words;
    VmOptions opts;
    opts.data_memory_size = 4096;
    auto m = vm_for(words, opts);
    bool ok = m.run() == StopReason::Stopped;
    ok = ok && m.quantum_clock() == 10005;
    ok = ok && format_cycles_us(10000) == "200 us";
    const std::string rendered = render_report(m, StopReason::Stopped);
    ok = ok && rendered.find("10005 cycles (200.1 us)") != std::string::npos;
    report(9, "QWAIT 10000 + PI 3 + duration 2 ends at clock 10005; 10000 "
              "cycles render as 200 us",
           ok, "clock=" + std::to_string(m.quantum_clock()));
}

int run_tool(const std::string &args) {
    const std::string cmd = kTool + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

void criterion_10_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eqasm_acceptance";
    fs::create_directories(dir);
    const std::string qmap = kRoot + "/configs/sim_default.qmap";
    const std::string prog = kRoot + "/programs/grover_cu10.qisa";

    bool ok = true;
    std::string detail;

    for (int round = 0; round < 2; ++round) {
        const std::string tag = std::to_string(round);
        ok = ok && run_tool("asm " + prog + " --qmap " + qmap + " -o " +
                            (dir / ("image" + tag + ".bin")).string()) == 0;
        ok = ok &&
             run_tool("run " + prog + " --qmap " + qmap + " --seed 5" +
                      " --trace " + (dir / ("trace" + tag + ".jsonl")).string() +
                      " --report " + (dir / ("report" + tag + ".txt")).string()) ==
                 0;
    }
    if (ok) {
        ok = read_file((dir / "image0.bin").string()) ==
                 read_file((dir / "image1.bin").string()) &&
             read_file((dir / "trace0.jsonl").string()) ==
                 read_file((dir / "trace1.jsonl").string()) &&
             read_file((dir / "report0.txt").string()) ==
                 read_file((dir / "report1.txt").string());
        if (!ok)
            detail = "outputs differ between identical runs";
    } else {
        detail = "tool invocation failed";
    }

    // Exit-code contract spot checks.
    if (ok) {
        ok = run_tool("asm " + kRoot + "/programs/smis_demo.qisa --qmap " +
                      qmap + " -o " + (dir / "demo.bin").string()) == 0;
        const int bad = run_tool("asm " + prog + " --qmap " + kRoot +
                                 "/configs/qisa_opcodes.qmap -o " +
                                 (dir / "bad.bin").string());
        ok = ok && bad == 2; // y90 is not in the reference qmap
        std::ofstream(dir / "short.bin", std::ios::binary) << "abcde";
        ok = ok && run_tool("disasm " + (dir / "short.bin").string() +
                            " --qmap " + qmap) == 3;
        ok = ok && run_tool("run " + kRoot +
                            "/programs/smis_demo.qisa --qmap " + qmap +
                            " --max-steps 10000") == 0;
        // endless loop exhausts the budget
        const fs::path loop_src = dir / "loop.qisa";
        std::ofstream(loop_src) << "loop: goto loop\n";
        ok = ok && run_tool("run " + loop_src.string() + " --qmap " + qmap +
                            " --max-steps 1000") == 5;
        // runtime failure: FMR with no measurement ever issued
        const fs::path bad_fmr = dir / "bad_fmr.qisa";
        std::ofstream(bad_fmr) << "fmr r1, q0\nstop\n";
        ok = ok && run_tool("run " + bad_fmr.string() + " --qmap " + qmap) == 4;
        // lint exits 0 by default and 1 under --strict when it finds
        // something
        const fs::path hazard = dir / "hazard.qisa";
        std::ofstream(hazard) << "cmp r1, r2\nbr eq, 2\nstop\n";
        ok = ok && run_tool("lint " + hazard.string() + " --qmap " + qmap) == 0;
        ok = ok && run_tool("lint " + hazard.string() + " --qmap " + qmap +
                            " --strict") == 1;
        if (!ok && detail.empty())
            detail = "exit-code contract violated";
    }
    report(10, "identical inputs and seed give byte-identical binaries, "
               "traces and reports; exit codes hold",
           ok, detail);
}

} // namespace

int main() {
    std::printf("eqasm acceptance suite\n");
    try {
        criterion_1_encoding_goldens();
        criterion_2_roundtrip();
        criterion_3_helpers();
        criterion_4_cmp_truth_table();
        criterion_5_macros();
        criterion_6_qmap();
        criterion_7_linter();
        criterion_8_quantum_end_to_end();
        criterion_9_timing();
        criterion_10_determinism();
    } catch (const std::exception &e) {
        std::printf("[FAIL] suite aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILED",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
