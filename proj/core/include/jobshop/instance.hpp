#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/types.hpp"

namespace jobshop {

// One job shop instance: n jobs, each a fixed sequence of operations, one
// operation per (job, position) with a required machine and an integer
// duration >= 1. Immutable after construction and safe to share across
// threads.
class Instance {
public:
    Instance(std::vector<std::vector<int>> machine,
             std::vector<std::vector<Time>> duration,
             std::string name = "");

    int n_jobs() const { return n_jobs_; }
    int n_machines() const { return n_machines_; }
    int n_ops() const { return n_jobs_ * n_machines_; }
    const std::string& name() const { return name_; }

    int machine_of(OperationId op) const { return machine_[op.job][op.position]; }
    Time duration_of(OperationId op) const { return duration_[op.job][op.position]; }

    // Dense linear index, job-major.
    int op_index(OperationId op) const { return op.job * n_machines_ + op.position; }
    OperationId op_at(int index) const {
        return OperationId{index / n_machines_, index % n_machines_};
    }

    std::optional<OperationId> predecessor(OperationId op) const {
        if (op.position == 0) return std::nullopt;
        return OperationId{op.job, op.position - 1};
    }
    std::optional<OperationId> successor(OperationId op) const {
        if (op.position + 1 >= n_machines_) return std::nullopt;
        return OperationId{op.job, op.position + 1};
    }

    const std::vector<OperationId>& ops_on_machine(int machine) const {
        return ops_on_machine_[machine];
    }

    Time total_duration() const { return total_duration_; }
    Time machine_load(int machine) const { return machine_load_[machine]; }
    Time job_length(int job) const { return job_length_[job]; }

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.machine_ == b.machine_ && a.duration_ == b.duration_ && a.name_ == b.name_;
    }

private:
    int n_jobs_ = 0;
    int n_machines_ = 0;
    std::vector<std::vector<int>> machine_;
    std::vector<std::vector<Time>> duration_;
    std::string name_;

    std::vector<std::vector<OperationId>> ops_on_machine_;
    std::vector<Time> machine_load_;
    std::vector<Time> job_length_;
    Time total_duration_ = 0;
};

// Parses the standard job shop text format: '#' starts a comment line, the
// first data line is "n m", then n lines each holding m "machine duration"
// pairs with 0-based machine indices. LF and CRLF are both accepted.
Instance parse_instance(const std::string& text, std::string name = "");

// Emits the same format parse_instance reads. parse(write(x), x.name()) == x.
std::string write_instance(const Instance& instance);

// Random instance: each job visits every machine exactly once in a uniform
// random order, durations i.i.d. uniform integers in [duration_lo,
// duration_hi]. Byte-identical output for identical arguments.
Instance generate_random_instance(int n_jobs, int n_machines, std::uint64_t seed,
                                  Time duration_lo = 1, Time duration_hi = 99);

enum class TrailerMode { Job, Machine, Max };

// Work that must still be processed after `op` runs: in Job mode the
// durations of the remaining operations of op's job; in Machine mode the
// durations of the operations on op's machine that are neither done nor op
// itself; Max is the larger of the two. `done` lists already-scheduled ops
// (only Machine/Max consult it).
Time trailer(const Instance& instance, OperationId op, TrailerMode mode,
             const std::vector<OperationId>& done = {});

} // namespace jobshop
