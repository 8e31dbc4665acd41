// eqasm: assembler, disassembler, linter and simulator for the CC-Light
// eQASM instruction set.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eqasm/codec.hpp"
#include "eqasm/disasm.hpp"
#include "eqasm/frontend.hpp"
#include "eqasm/vm.hpp"

namespace {

// Exit codes: 0 success, 2 parse/resolve/config error, 3 encode/decode
// error, 4 runtime error, 5 max-steps exhaustion.
constexpr int kExitUsage = 2;
constexpr int kExitParse = 2;
constexpr int kExitCodec = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitMaxSteps = 5;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw eqasm::Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string &path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw eqasm::Error("cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

bool ends_with(const std::string &s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct CommonArgs {
    std::string input;
    std::string qmap_path;
    std::string gates_path;
    std::string topology_path;
    bool strict = false;
    bool big_endian = false;
};

eqasm::OpcodeMap load_qmap(const CommonArgs &args) {
    std::vector<eqasm::Diagnostic> warnings;
    auto map = eqasm::OpcodeMap::parse_qmap(read_file(args.qmap_path),
                                            args.qmap_path, &warnings);
    std::cerr << eqasm::render_diagnostics(warnings);
    return map;
}

eqasm::Topology load_topology(const CommonArgs &args) {
    if (args.topology_path.empty()) {
        std::cerr << "note: using the built-in default topology "
                     "(--topology not given)\n";
        return eqasm::Topology::default_topology();
    }
    return eqasm::Topology::parse(read_file(args.topology_path),
                                  args.topology_path);
}

eqasm::GateSemantics load_gates(const CommonArgs &args,
                                const eqasm::OpcodeMap &map) {
    if (args.gates_path.empty()) {
        std::cerr << "note: using the built-in default gate semantics "
                     "(--gates not given)\n";
        return eqasm::GateSemantics::parse(
            eqasm::default_gate_semantics_text(), map, "<built-in>");
    }
    return eqasm::GateSemantics::parse(read_file(args.gates_path), map,
                                       args.gates_path);
}

std::string make_listing(const eqasm::Assembly &assembly,
                         const std::string &source) {
    std::vector<std::string> lines;
    std::istringstream in(source);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }

    std::ostringstream os;
    int last_line = -1;
    for (std::size_t i = 0; i < assembly.resolved.items.size(); ++i) {
        const auto &item = assembly.resolved.items[i];
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%08x  0x%08x  ", item.address,
                      assembly.words[i]);
        os << buf;
        if (item.loc.line > 0 && item.loc.line != last_line &&
            static_cast<std::size_t>(item.loc.line) <= lines.size()) {
            os << lines[static_cast<std::size_t>(item.loc.line - 1)];
            last_line = item.loc.line;
        }
        os << '\n';
    }
    return os.str();
}

int cmd_asm(const CommonArgs &args, std::string out_path,
            const std::string &listing_path) {
    const std::string source = read_file(args.input);
    const auto qmap = load_qmap(args);
    const auto topology = load_topology(args);
    const auto assembly = eqasm::assemble(source, qmap, topology, args.input);

    if (out_path.empty()) {
        out_path = args.input;
        if (ends_with(out_path, ".qisa"))
            out_path.resize(out_path.size() - 5);
        out_path += ".bin";
    }
    const auto bytes = eqasm::image_to_bytes(assembly.words, args.big_endian);
    write_file(out_path,
               std::string_view(reinterpret_cast<const char *>(bytes.data()),
                                bytes.size()));
    if (!listing_path.empty())
        write_file(listing_path, make_listing(assembly, source));
    return 0;
}

int cmd_disasm(const CommonArgs &args, const std::string &out_path) {
    const std::string raw = read_file(args.input);
    const auto words = eqasm::image_from_bytes(
        std::span(reinterpret_cast<const std::uint8_t *>(raw.data()),
                  raw.size()),
        args.big_endian);
    const auto qmap = load_qmap(args);
    const std::string text = eqasm::disassemble(
        words, qmap,
        args.strict ? eqasm::DecodeMode::Strict
                    : eqasm::DecodeMode::Permissive);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return 0;
}

int cmd_lint(const CommonArgs &args) {
    const std::string source = read_file(args.input);
    const auto qmap = load_qmap(args);
    const auto topology = load_topology(args);
    const auto gates = load_gates(args, qmap);

    const auto parsed =
        eqasm::parse_program(eqasm::tokenize(source, args.input), args.input);
    const auto resolved =
        eqasm::resolve(eqasm::expand_macros(parsed), qmap, topology);
    const auto findings = eqasm::lint_latency(resolved, gates);
    std::cerr << eqasm::render_diagnostics(findings);
    std::cout << "lint: " << findings.size() << " finding"
              << (findings.size() == 1 ? "" : "s") << "\n";
    return (args.strict && !findings.empty()) ? 1 : 0;
}

struct RunArgs {
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 10'000'000;
    std::size_t memory_size = 1u << 20;
    bool allow_overlap = false;
    bool debug_state = false;
    std::string trace_path;
    std::string report_path;
};

int cmd_run(const CommonArgs &args, const RunArgs &run) {
    const auto qmap = load_qmap(args);
    const auto topology = load_topology(args);
    const auto gates = load_gates(args, qmap);

    std::vector<std::uint32_t> words;
    if (ends_with(args.input, ".bin")) {
        const std::string raw = read_file(args.input);
        words = eqasm::image_from_bytes(
            std::span(reinterpret_cast<const std::uint8_t *>(raw.data()),
                      raw.size()),
            args.big_endian);
    } else {
        words = eqasm::assemble(read_file(args.input), qmap, topology,
                                args.input)
                    .words;
    }

    eqasm::VmOptions options;
    options.seed = run.seed;
    options.max_steps = run.max_steps;
    options.data_memory_size = run.memory_size;
    options.allow_qubit_overlap = run.allow_overlap;
    options.decode_mode = args.strict ? eqasm::DecodeMode::Strict
                                      : eqasm::DecodeMode::Permissive;

    eqasm::Machine machine(std::move(words), gates, topology, options, &qmap);
    std::ofstream trace_file;
    if (!run.trace_path.empty()) {
        trace_file.open(run.trace_path, std::ios::binary);
        if (!trace_file)
            throw eqasm::Error("cannot write '" + run.trace_path + "'");
        machine.set_trace(&trace_file);
    }

    const eqasm::StopReason reason = machine.run();
    const std::string report =
        eqasm::render_report(machine, reason, run.debug_state);
    std::cout << report;
    if (!run.report_path.empty())
        write_file(run.report_path, report);
    return reason == eqasm::StopReason::Stopped ? 0 : kExitMaxSteps;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"CC-Light eQASM toolchain: assemble, disassemble, lint and "
                 "simulate"};
    app.require_subcommand(1);

    CommonArgs common;
    RunArgs run;
    std::string out_path;
    std::string listing_path;

    const auto add_common = [&](CLI::App *cmd, bool needs_qmap) {
        cmd->add_option("input", common.input, "input file")->required();
        auto *q = cmd->add_option("--qmap", common.qmap_path,
                                  "quantum opcode map (.qmap)");
        if (needs_qmap)
            q->required();
        cmd->add_flag("--strict", common.strict,
                      "reject nonzero reserved bits and lossy words");
        cmd->add_flag("--big-endian", common.big_endian,
                      "binary images use big-endian words");
    };

    auto *casm = app.add_subcommand("asm", "assemble a .qisa source file");
    add_common(casm, true);
    casm->add_option("-o,--output", out_path, "output binary (default: "
                                              "<input>.bin)");
    casm->add_option("--listing", listing_path,
                     "write an address/word/source listing");
    casm->add_option("--topology", common.topology_path,
                     "qubit-pair topology file");

    auto *cdis = app.add_subcommand("disasm", "disassemble a binary image");
    add_common(cdis, true);
    cdis->add_option("-o,--output", out_path, "output file (default: stdout)");

    auto *clint = app.add_subcommand(
        "lint", "check a program against the latency rules");
    add_common(clint, true);
    clint->add_option("--topology", common.topology_path,
                      "qubit-pair topology file");
    clint->add_option("--gates", common.gates_path,
                      "gate-semantics file (for measurement roles)");

    auto *crun = app.add_subcommand("run", "execute a program or image");
    add_common(crun, true);
    crun->add_option("--topology", common.topology_path,
                     "qubit-pair topology file");
    crun->add_option("--gates", common.gates_path, "gate-semantics file");
    crun->add_option("--seed", run.seed, "measurement PRNG seed (default 0)");
    crun->add_option("--max-steps", run.max_steps,
                     "instruction budget before giving up");
    crun->add_option("--memory-size", run.memory_size,
                     "data memory size in bytes (default 1 MiB)");
    crun->add_flag("--allow-overlap", run.allow_overlap,
                   "downgrade qubit conflicts to warnings");
    crun->add_flag("--debug-state", run.debug_state,
                   "include final state-vector amplitudes in the report");
    crun->add_option("--trace", run.trace_path, "write a JSON-lines trace");
    crun->add_option("--report", run.report_path,
                     "also write the report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (casm->parsed())
            return cmd_asm(common, out_path, listing_path);
        if (cdis->parsed())
            return cmd_disasm(common, out_path);
        if (clint->parsed())
            return cmd_lint(common);
        if (crun->parsed())
            return cmd_run(common, run);
    } catch (const eqasm::ParseError &e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const eqasm::ConfigError &e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const eqasm::EncodeError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCodec;
    } catch (const eqasm::DecodeError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCodec;
    } catch (const eqasm::RuntimeError &e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const eqasm::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
