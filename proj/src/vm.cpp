#include "eqasm/vm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "eqasm/bits.hpp"
#include "eqasm/disasm.hpp"

namespace eqasm {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::string hex32(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

} // namespace

Machine::Machine(std::vector<std::uint32_t> image, const GateSemantics &gates,
                 const Topology &topology, VmOptions options,
                 const OpcodeMap *opcode_names)
    : image_(std::move(image)), gates_(gates), topology_(topology),
      options_(options), opcode_names_(opcode_names),
      memory_(options.data_memory_size, 0), rng_(options.seed) {
    if (image_.size() * 4 > kMaxImageBytes)
        throw RuntimeError("instruction image exceeds the 2^17-byte limit");
    compflags_[static_cast<std::size_t>(CompFlag::Always)] = true;
}

ExecFlags Machine::execution_flags(int q) const {
    const auto &h = history_[static_cast<std::size_t>(q)];
    return ExecFlags{
        true,
        h.count >= 1 && h.last == 1,
        h.count >= 1 && h.last == 0,
        h.count >= 2 && h.last == h.second_last,
    };
}

void Machine::note(const std::string &message) {
    diagnostics_.push_back({Severity::Warning, {}, message});
}

void Machine::write_gpr(std::uint8_t rd, std::uint32_t value) {
    gprs_[rd] = value;
    step_writes_.emplace_back("r" + std::to_string(rd), value);
}

std::uint32_t Machine::load_word(std::uint32_t address) {
    if (static_cast<std::uint64_t>(address) + 4 > memory_.size())
        throw RuntimeError("memory load out of bounds at " + hex32(address),
                           pc_);
    if (address % 4 != 0)
        note("unaligned word load at " + hex32(address));
    return static_cast<std::uint32_t>(memory_[address]) |
           (static_cast<std::uint32_t>(memory_[address + 1]) << 8) |
           (static_cast<std::uint32_t>(memory_[address + 2]) << 16) |
           (static_cast<std::uint32_t>(memory_[address + 3]) << 24);
}

void Machine::store_word(std::uint32_t address, std::uint32_t value) {
    if (static_cast<std::uint64_t>(address) + 4 > memory_.size())
        throw RuntimeError("memory store out of bounds at " + hex32(address),
                           pc_);
    if (address % 4 != 0)
        note("unaligned word store at " + hex32(address));
    memory_[address] = static_cast<std::uint8_t>(value);
    memory_[address + 1] = static_cast<std::uint8_t>(value >> 8);
    memory_[address + 2] = static_cast<std::uint8_t>(value >> 16);
    memory_[address + 3] = static_cast<std::uint8_t>(value >> 24);
}

void Machine::check_norm() {
    if (std::abs(device_.norm() - 1.0) > 1e-9)
        throw RuntimeError("state-vector norm drifted beyond 1e-9", pc_);
}

void Machine::enqueue(TimedEvent::Kind kind, std::uint32_t opcode, int q0,
                      int q1, int duration) {
    events_.push(TimedEvent{last_timing_point_, next_seq_++, kind, opcode, q0,
                            q1, duration, pc_});
    const char *name = kind == TimedEvent::Kind::Gate      ? "gate"
                       : kind == TimedEvent::Kind::Measure ? "measure"
                                                           : "prepare";
    step_events_.push_back(
        {name, opcode, q0, q1, last_timing_point_, duration});
}

void Machine::issue_bundle(const ins::BundleWord &bundle) {
    last_timing_point_ += bundle.pi;
    for (const auto &op : {bundle.op0, bundle.op1}) {
        if (op.opcode == 0)
            continue;
        const auto *sem = gates_.by_opcode(op.opcode);
        if (!sem)
            throw RuntimeError("quantum opcode " + std::to_string(op.opcode) +
                                   " has no configured semantics",
                               pc_);
        if (sem->kind == OpKind::Single) {
            const std::uint8_t mask = qotrs_[op.target];
            for (int q = 0; q < kNumQubits; ++q) {
                if (!(mask & (1u << q)))
                    continue;
                switch (sem->role) {
                case GateRole::Unitary:
                    enqueue(TimedEvent::Kind::Gate, op.opcode, q, -1,
                            sem->duration);
                    break;
                case GateRole::Measure:
                    enqueue(TimedEvent::Kind::Measure, op.opcode, q, -1,
                            sem->duration);
                    qmrr_[static_cast<std::size_t>(q)].valid = false;
                    last_meas_issue_[static_cast<std::size_t>(q)] =
                        last_timing_point_;
                    break;
                case GateRole::Prepare:
                    enqueue(TimedEvent::Kind::Prepare, op.opcode, q, -1,
                            sem->duration);
                    break;
                }
            }
        } else {
            const std::uint16_t mask = qotrt_[op.target];
            for (int bit = 0; bit < kNumQubitPairs; ++bit) {
                if (!(mask & (1u << bit)))
                    continue;
                const auto [src, tgt] = topology_.pairs()[static_cast<std::size_t>(bit)];
                enqueue(TimedEvent::Kind::Gate, op.opcode, src, tgt,
                        sem->duration);
            }
        }
    }
}

void Machine::process_event(const TimedEvent &e) {
    for (int q : {e.q0, e.q1}) {
        if (q < 0)
            continue;
        auto &busy = busy_until_[static_cast<std::size_t>(q)];
        if (e.at_cycle < busy) {
            const std::string msg =
                "qubit conflict: qubit " + std::to_string(q) +
                " is busy until cycle " + std::to_string(busy) +
                ", event starts at " + std::to_string(e.at_cycle);
            if (options_.allow_qubit_overlap)
                note(msg);
            else
                throw RuntimeError(msg, e.issue_pc);
        }
        busy = e.at_cycle + static_cast<std::uint64_t>(e.duration);
    }
    const std::uint64_t done =
        e.at_cycle + static_cast<std::uint64_t>(e.duration);
    max_completion_ = std::max(max_completion_, done);

    switch (e.kind) {
    case TimedEvent::Kind::Gate: {
        const auto *sem = gates_.by_opcode(e.opcode);
        if (e.q1 < 0)
            device_.apply_single(e.q0, sem->u2);
        else
            device_.apply_two(e.q0, e.q1, sem->u4);
        break;
    }
    case TimedEvent::Kind::Measure: {
        const int result = device_.measure(e.q0, rng_);
        auto &h = history_[static_cast<std::size_t>(e.q0)];
        h.second_last = h.last;
        h.last = result;
        ++h.count;
        qmrr_[static_cast<std::size_t>(e.q0)] = {true, result};
        last_meas_done_[static_cast<std::size_t>(e.q0)] = done;
        measurement_log_.push_back({e.q0, e.at_cycle, done, result});
        break;
    }
    case TimedEvent::Kind::Prepare:
        device_.reset(e.q0, rng_);
        break;
    }
    check_norm();
}

void Machine::advance_events_through(std::uint64_t cycle) {
    while (!events_.empty() && events_.top().at_cycle <= cycle) {
        const TimedEvent e = events_.top();
        events_.pop();
        process_event(e);
    }
}

void Machine::drain_events() {
    advance_events_through(~0ull);
    quantum_clock_ =
        std::max({quantum_clock_, max_completion_, last_timing_point_});
}

void Machine::exec(const Instruction &instr) {
    std::visit(
        overloaded{
            [&](const ins::Nop &) { pc_ += 4; },
            [&](const ins::Stop &) { stopped_ = true; },
            [&](const ins::Alu &i) {
                const std::uint32_t a = gprs_[i.rs];
                const std::uint32_t b = gprs_[i.rt];
                std::uint32_t r = 0;
                switch (i.op) {
                case ins::AluOp::Add: r = a + b; break;
                case ins::AluOp::Sub: r = a + ~b + 1; break;
                case ins::AluOp::And: r = a & b; break;
                case ins::AluOp::Or: r = a | b; break;
                case ins::AluOp::Xor: r = a ^ b; break;
                }
                write_gpr(i.rd, r);
                pc_ += 4;
            },
            [&](const ins::Not &i) {
                write_gpr(i.rd, ~gprs_[i.rt]);
                pc_ += 4;
            },
            [&](const ins::Cmp &i) {
                const std::uint32_t s = gprs_[i.rs];
                const std::uint32_t t = gprs_[i.rt];
                const std::int32_t ss = static_cast<std::int32_t>(s);
                const std::int32_t ts = static_cast<std::int32_t>(t);
                const auto set = [&](CompFlag f, bool v) {
                    compflags_[static_cast<std::size_t>(f)] = v;
                };
                set(CompFlag::Always, true);
                set(CompFlag::Never, false);
                set(CompFlag::Eq, t == s);
                set(CompFlag::Ne, t != s);
                set(CompFlag::Ltu, t < s);
                set(CompFlag::Geu, t >= s);
                set(CompFlag::Leu, t <= s);
                set(CompFlag::Gtu, t > s);
                set(CompFlag::Lt, ts < ss);
                set(CompFlag::Ge, ts >= ss);
                set(CompFlag::Le, ts <= ss);
                set(CompFlag::Gt, ts > ss);
                pc_ += 4;
            },
            [&](const ins::Br &i) {
                if (compflags_[static_cast<std::size_t>(i.flag)]) {
                    // Exactly the printed arithmetic: 17-bit signed PC
                    // plus the shifted 15-bit offset, wrapped through an
                    // 18-bit two's complement and truncated to 17 bits.
                    const BitString shifted = concat(
                        BitString::from_sint(i.offset_words, 15),
                        BitString::zeros(2));
                    const std::int64_t sum =
                        BitString::of(pc_, 32).sint_value(17) +
                        shifted.sint_value(17);
                    pc_ = static_cast<std::uint32_t>(
                        BitString::from_sint(sum, 18).slice(16, 0).uint_value());
                } else {
                    pc_ += 4;
                }
            },
            [&](const ins::Fbr &i) {
                write_gpr(i.rd,
                          compflags_[static_cast<std::size_t>(i.flag)] ? 1 : 0);
                pc_ += 4;
            },
            [&](const ins::Fmr &i) {
                const auto q = static_cast<std::size_t>(i.qubit);
                if (!last_meas_issue_[q])
                    throw RuntimeError("FMR before any measurement on qubit " +
                                           std::to_string(i.qubit),
                                       pc_);
                // Wait for the last issued measurement to finish.
                advance_events_through(*last_meas_issue_[q]);
                quantum_clock_ = std::max(quantum_clock_, last_meas_done_[q]);
                write_gpr(i.rd,
                          static_cast<std::uint32_t>(qmrr_[q].value));
                pc_ += 4;
            },
            [&](const ins::Ld &i) {
                const std::uint32_t addr =
                    gprs_[i.rt] + static_cast<std::uint32_t>(i.imm10);
                write_gpr(i.rd, load_word(addr));
                pc_ += 4;
            },
            [&](const ins::St &i) {
                const std::uint32_t addr =
                    gprs_[i.rt] + static_cast<std::uint32_t>(i.imm10);
                store_word(addr, gprs_[i.rs]);
                pc_ += 4;
            },
            [&](const ins::Ldi &i) {
                write_gpr(i.rd, static_cast<std::uint32_t>(i.imm20));
                pc_ += 4;
            },
            [&](const ins::Ldui &i) {
                write_gpr(i.rd, (i.imm15 << 17) | (gprs_[i.rs] & 0x1FFFFu));
                pc_ += 4;
            },
            [&](const ins::Qwait &i) {
                ++timing_label_;
                last_timing_point_ += i.imm20;
                pc_ += 4;
            },
            [&](const ins::Qwaitr &i) {
                const std::uint32_t raw = gprs_[i.rs];
                if (raw > 0xFFFFFu)
                    note("QWAITR truncates " + hex32(raw) +
                         " to its 20 least significant bits");
                ++timing_label_;
                last_timing_point_ += raw & 0xFFFFFu;
                pc_ += 4;
            },
            [&](const ins::Smis &i) {
                qotrs_[i.sd] = i.mask7;
                step_writes_.emplace_back("s" + std::to_string(i.sd), i.mask7);
                pc_ += 4;
            },
            [&](const ins::Smit &i) {
                qotrt_[i.td] = i.mask16;
                step_writes_.emplace_back("t" + std::to_string(i.td),
                                          i.mask16);
                pc_ += 4;
            },
            [&](const ins::BundleWord &b) {
                issue_bundle(b);
                pc_ += 4;
            },
        },
        instr);
}

void Machine::emit_trace(const Instruction &instr, std::uint32_t pc_before) {
    nlohmann::ordered_json rec;
    rec["pc"] = pc_before;
    rec["insn"] = render_instruction(instr, opcode_names_);
    nlohmann::ordered_json writes = nlohmann::ordered_json::object();
    for (const auto &[name, value] : step_writes_)
        writes[name] = value;
    rec["writes"] = std::move(writes);
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const auto &e : step_events_) {
        nlohmann::ordered_json ev;
        ev["kind"] = e.kind;
        ev["opcode"] = e.opcode;
        nlohmann::ordered_json qubits = nlohmann::ordered_json::array();
        qubits.push_back(e.q0);
        if (e.q1 >= 0)
            qubits.push_back(e.q1);
        ev["qubits"] = std::move(qubits);
        ev["at"] = e.at;
        ev["duration"] = e.duration;
        events.push_back(std::move(ev));
    }
    rec["events"] = std::move(events);
    rec["clock"] = quantum_clock_;
    rec["timing_point"] = last_timing_point_;
    *trace_ << rec.dump() << '\n';
}

bool Machine::step() {
    if (stopped_)
        return false;
    if (pc_ % 4 != 0)
        throw RuntimeError("PC is not word aligned", pc_);
    const std::uint32_t index = pc_ / 4;
    if (index >= image_.size())
        throw RuntimeError("PC out of range (image has " +
                               std::to_string(image_.size()) + " words)",
                           pc_);
    const Instruction instr =
        decode(image_[index], options_.decode_mode, index);

    step_writes_.clear();
    step_events_.clear();
    const std::uint32_t pc_before = pc_;
    exec(instr);
    ++retired_;
    if (trace_)
        emit_trace(instr, pc_before);
    return true;
}

StopReason Machine::run() {
    std::uint64_t steps = 0;
    while (!stopped_) {
        if (steps >= options_.max_steps) {
            drain_events();
            return StopReason::MaxSteps;
        }
        step();
        ++steps;
    }
    drain_events();
    return StopReason::Stopped;
}

// ---------------------------------------------------------------------------
// Report

std::string render_report(const Machine &m, StopReason reason,
                          bool with_amplitudes) {
    std::ostringstream os;
    const char *status =
        reason == StopReason::Stopped ? "stopped" : "max-steps";

    os << "eqasm run report\n";
    os << "status:          " << status << "\n";
    os << "retired:         " << m.retired() << " instructions\n";
    os << "quantum clock:   " << m.quantum_clock() << " cycles ("
       << format_cycles_us(m.quantum_clock()) << ")\n";
    os << "timing labels:   " << m.timing_label() << "\n";
    os << "seed:            " << m.options().seed << "\n";

    os << "gpr (nonzero):\n";
    bool any = false;
    for (int i = 0; i < kNumGprs; ++i) {
        if (m.gpr(i) != 0) {
            os << "  r" << i << " = " << hex32(m.gpr(i)) << " (" << m.gpr(i)
               << ")\n";
            any = true;
        }
    }
    if (!any)
        os << "  (all zero)\n";

    os << "qmrr:            ";
    for (int q = 0; q < kNumQubits; ++q) {
        const auto &r = m.qmrr(q);
        os << "q" << q << "=" << (r.valid ? std::to_string(r.value) : "-")
           << (q + 1 < kNumQubits ? " " : "\n");
    }

    os << "exec flags:      ";
    for (int q = 0; q < kNumQubits; ++q) {
        const auto f = m.execution_flags(q);
        os << "q" << q << "=" << f.unconditional << f.last_one << f.last_zero
           << f.last_two_same << (q + 1 < kNumQubits ? " " : "\n");
    }

    os << "measurements:    " << m.measurement_log().size() << "\n";
    for (const auto &rec : m.measurement_log())
        os << "  q" << rec.qubit << " cycles " << rec.start_cycle << ".."
           << rec.done_cycle << " -> " << rec.result << "\n";

    for (const auto &d : m.diagnostics())
        os << "note: " << d.message << "\n";

    if (with_amplitudes) {
        os << "state amplitudes (nonzero):\n";
        const auto &amps = m.device().amplitudes();
        for (int n = 0; n < QuantumDevice::kDim; ++n) {
            const auto a = amps[static_cast<std::size_t>(n)];
            if (std::abs(a) < 1e-12)
                continue;
            char buf[96];
            std::snprintf(buf, sizeof buf, "  |%s> = %.12g %+.12gi\n",
                          BitString::of(static_cast<std::uint32_t>(n), 7)
                              .to_string()
                              .c_str(),
                          a.real(), a.imag());
            os << buf;
        }
    }

    // Machine-readable tail.
    nlohmann::ordered_json j;
    j["status"] = status;
    j["retired"] = m.retired();
    j["quantum_clock_cycles"] = m.quantum_clock();
    j["quantum_clock"] = format_cycles_us(m.quantum_clock());
    j["timing_labels"] = m.timing_label();
    j["seed"] = m.options().seed;
    nlohmann::ordered_json gprs = nlohmann::ordered_json::array();
    for (int i = 0; i < kNumGprs; ++i)
        gprs.push_back(hex32(m.gpr(i)));
    j["gprs"] = std::move(gprs);
    nlohmann::ordered_json qmrr = nlohmann::ordered_json::array();
    for (int q = 0; q < kNumQubits; ++q) {
        nlohmann::ordered_json e;
        e["valid"] = m.qmrr(q).valid;
        e["value"] = m.qmrr(q).value;
        qmrr.push_back(std::move(e));
    }
    j["qmrr"] = std::move(qmrr);
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    for (int q = 0; q < kNumQubits; ++q) {
        const auto f = m.execution_flags(q);
        flags.push_back(nlohmann::ordered_json::array(
            {f.unconditional, f.last_one, f.last_zero, f.last_two_same}));
    }
    j["exec_flags"] = std::move(flags);
    nlohmann::ordered_json log = nlohmann::ordered_json::array();
    for (const auto &rec : m.measurement_log()) {
        nlohmann::ordered_json e;
        e["qubit"] = rec.qubit;
        e["cycle"] = rec.start_cycle;
        e["done"] = rec.done_cycle;
        e["result"] = rec.result;
        log.push_back(std::move(e));
    }
    j["measurements"] = std::move(log);
    os << "json: " << j.dump() << "\n";
    return os.str();
}

} // namespace eqasm
