#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "eqasm/codec.hpp"
#include "eqasm/config.hpp"
#include "eqasm/quantum.hpp"

namespace eqasm {

struct VmOptions {
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 10'000'000;
    std::size_t data_memory_size = 1u << 20;
    bool allow_qubit_overlap = false; // downgrade conflicts to warnings
    DecodeMode decode_mode = DecodeMode::Permissive;
};

enum class StopReason { Stopped, MaxSteps };

struct MeasurementRecord {
    int qubit;
    std::uint64_t start_cycle; // timing point the measurement was issued at
    std::uint64_t done_cycle;  // start + configured duration
    int result;
};

struct QmrrValue {
    bool valid = false;
    int value = 0;
};

// The four per-qubit execution flags derived from measurement history.
struct ExecFlags {
    bool unconditional; // always 1
    bool last_one;      // last finished result was |1>
    bool last_zero;     // last finished result was |0>
    bool last_two_same; // last two finished results agree
};

// Executes a binary image against the full architectural state: PC,
// GPRs, comparison flags, quantum target registers, QMRRs, execution
// flags, data memory, the queue-based quantum timeline and the
// state-vector device.
class Machine {
public:
    Machine(std::vector<std::uint32_t> image, const GateSemantics &gates,
            const Topology &topology, VmOptions options,
            const OpcodeMap *opcode_names = nullptr);

    // JSON-lines trace sink (one object per retired instruction).
    void set_trace(std::ostream *os) { trace_ = os; }

    // Executes one instruction; false once stopped. Throws RuntimeError
    // on execution failures, DecodeError for bad words.
    bool step();

    // Runs until STOP or max_steps, then drains the event queue.
    StopReason run();

    // Processes every pending event and advances the clock to quiescence.
    void drain_events();

    // -- architectural state --
    std::uint32_t pc() const { return pc_; }
    std::uint32_t gpr(int i) const { return gprs_[static_cast<std::size_t>(i)]; }
    void set_gpr(int i, std::uint32_t v) {
        gprs_[static_cast<std::size_t>(i)] = v;
    }
    bool comp_flag(CompFlag f) const {
        return compflags_[static_cast<std::size_t>(f)];
    }
    std::uint8_t qotrs(int i) const { return qotrs_[static_cast<std::size_t>(i)]; }
    std::uint16_t qotrt(int i) const {
        return qotrt_[static_cast<std::size_t>(i)];
    }
    const QmrrValue &qmrr(int q) const {
        return qmrr_[static_cast<std::size_t>(q)];
    }
    ExecFlags execution_flags(int q) const;
    bool stopped() const { return stopped_; }
    std::uint64_t retired() const { return retired_; }
    std::uint64_t quantum_clock() const { return quantum_clock_; }
    std::uint64_t timing_label() const { return timing_label_; }
    std::uint64_t last_timing_point() const { return last_timing_point_; }
    const std::vector<MeasurementRecord> &measurement_log() const {
        return measurement_log_;
    }
    const QuantumDevice &device() const { return device_; }
    const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }
    const VmOptions &options() const { return options_; }

    std::uint32_t load_word(std::uint32_t address);
    void store_word(std::uint32_t address, std::uint32_t value);

private:
    struct TimedEvent {
        std::uint64_t at_cycle;
        std::uint64_t seq; // FIFO tie-break among equal cycles
        enum class Kind { Gate, Measure, Prepare } kind;
        std::uint32_t opcode;
        int q0;
        int q1; // -1 for single-qubit events
        int duration;
        std::uint32_t issue_pc;
    };
    struct EventAfter {
        bool operator()(const TimedEvent &a, const TimedEvent &b) const {
            if (a.at_cycle != b.at_cycle)
                return a.at_cycle > b.at_cycle;
            return a.seq > b.seq;
        }
    };

    struct TraceEvent {
        const char *kind;
        std::uint32_t opcode;
        int q0, q1;
        std::uint64_t at;
        int duration;
    };

    void exec(const Instruction &instr);
    void issue_bundle(const ins::BundleWord &bundle);
    void enqueue(TimedEvent::Kind kind, std::uint32_t opcode, int q0, int q1,
                 int duration);
    void process_event(const TimedEvent &e);
    void advance_events_through(std::uint64_t cycle);
    void check_norm();
    void write_gpr(std::uint8_t rd, std::uint32_t value);
    void note(const std::string &message);
    void emit_trace(const Instruction &instr, std::uint32_t pc_before);

    std::vector<std::uint32_t> image_;
    const GateSemantics &gates_;
    const Topology &topology_;
    VmOptions options_;
    const OpcodeMap *opcode_names_;

    std::uint32_t pc_ = 0;
    std::array<std::uint32_t, kNumGprs> gprs_{};
    std::array<bool, kNumCompFlags> compflags_{};
    std::array<std::uint8_t, kNumTargetRegs> qotrs_{};
    std::array<std::uint16_t, kNumTargetRegs> qotrt_{};
    std::array<QmrrValue, kNumQubits> qmrr_{};
    struct MeasHistory {
        std::uint64_t count = 0;
        int last = 0;
        int second_last = 0;
    };
    std::array<MeasHistory, kNumQubits> history_{};
    std::vector<std::uint8_t> memory_;
    bool stopped_ = false;
    std::uint64_t retired_ = 0;

    std::uint64_t timing_label_ = 0;
    std::uint64_t last_timing_point_ = 0;
    std::uint64_t quantum_clock_ = 0;
    std::uint64_t max_completion_ = 0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<TimedEvent, std::vector<TimedEvent>, EventAfter>
        events_;
    std::array<std::uint64_t, kNumQubits> busy_until_{};
    // Issue bookkeeping for FMR: cycle of the most recently issued
    // measurement per qubit, and its completion once processed.
    std::array<std::optional<std::uint64_t>, kNumQubits> last_meas_issue_{};
    std::array<std::uint64_t, kNumQubits> last_meas_done_{};

    QuantumDevice device_;
    SplitMix64 rng_;

    std::vector<MeasurementRecord> measurement_log_;
    std::vector<Diagnostic> diagnostics_;
    std::ostream *trace_ = nullptr;

    // per-step trace accumulation
    std::vector<std::pair<std::string, std::uint64_t>> step_writes_;
    std::vector<TraceEvent> step_events_;
};

// Human-readable summary plus a machine-readable JSON tail. Amplitudes
// are included when with_amplitudes is set.
std::string render_report(const Machine &machine, StopReason reason,
                          bool with_amplitudes = false);

} // namespace eqasm
