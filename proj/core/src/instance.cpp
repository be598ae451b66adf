#include "jobshop/instance.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace jobshop {

namespace {

// Unbiased bounded draw. std::uniform_int_distribution is not pinned by the
// standard, so instance generation rolls its own to keep files reproducible
// across toolchains.
std::uint64_t bounded_draw(std::uint64_t& state, std::uint64_t bound) {
    // splitmix64 step
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
}

} // namespace

Instance::Instance(std::vector<std::vector<int>> machine,
                   std::vector<std::vector<Time>> duration, std::string name)
    : machine_(std::move(machine)), duration_(std::move(duration)), name_(std::move(name)) {
    n_jobs_ = static_cast<int>(machine_.size());
    if (n_jobs_ == 0) throw std::invalid_argument("instance must have at least one job");
    if (duration_.size() != machine_.size())
        throw std::invalid_argument("machine/duration job counts differ");
    n_machines_ = static_cast<int>(machine_[0].size());
    if (n_machines_ == 0) throw std::invalid_argument("instance must have at least one machine");

    ops_on_machine_.resize(n_machines_);
    machine_load_.assign(n_machines_, 0);
    job_length_.assign(n_jobs_, 0);

    for (int j = 0; j < n_jobs_; ++j) {
        if (static_cast<int>(machine_[j].size()) != n_machines_ ||
            static_cast<int>(duration_[j].size()) != n_machines_)
            throw std::invalid_argument("job " + std::to_string(j) +
                                        " does not have one operation per machine");
        std::vector<bool> seen(n_machines_, false);
        for (int p = 0; p < n_machines_; ++p) {
            const int m = machine_[j][p];
            if (m < 0 || m >= n_machines_)
                throw std::invalid_argument("machine index " + std::to_string(m) +
                                            " out of range in job " + std::to_string(j));
            if (seen[m])
                throw std::invalid_argument("job " + std::to_string(j) + " visits machine " +
                                            std::to_string(m) + " twice");
            seen[m] = true;
            const Time d = duration_[j][p];
            if (d < 1)
                throw std::invalid_argument("duration " + std::to_string(d) + " of operation " +
                                            to_string({j, p}) + " must be >= 1");
            ops_on_machine_[m].push_back(OperationId{j, p});
            machine_load_[m] += d;
            job_length_[j] += d;
            total_duration_ += d;
        }
    }
}

Instance parse_instance(const std::string& text, std::string name) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    int n = -1, m = -1;
    std::vector<std::vector<int>> machine;
    std::vector<std::vector<Time>> duration;
    int jobs_read = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv(line);
        const auto first = sv.find_first_not_of(" \t");
        if (first == std::string_view::npos || sv[first] == '#') continue;

        std::istringstream fields{line};
        if (n < 0) {
            if (!(fields >> n >> m) || n < 1 || m < 1)
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": malformed header, expected \"n m\"");
            machine.assign(n, {});
            duration.assign(n, {});
            continue;
        }
        if (jobs_read >= n)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": more job lines than the declared " + std::to_string(n));
        for (int p = 0; p < m; ++p) {
            long long mach, dur;
            if (!(fields >> mach >> dur))
                throw std::runtime_error("line " + std::to_string(line_no) + ": job " +
                                         std::to_string(jobs_read) + " must list " +
                                         std::to_string(m) + " machine/duration pairs");
            if (mach < 0 || mach >= m)
                throw std::runtime_error("line " + std::to_string(line_no) + ": machine index " +
                                         std::to_string(mach) + " out of range");
            if (dur < 0)
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": negative duration " + std::to_string(dur));
            machine[jobs_read].push_back(static_cast<int>(mach));
            duration[jobs_read].push_back(static_cast<Time>(dur));
        }
        long long extra;
        if (fields >> extra)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": trailing fields after " + std::to_string(m) + " pairs");
        ++jobs_read;
    }

    if (n < 0) throw std::runtime_error("empty instance text");
    if (jobs_read != n)
        throw std::runtime_error("expected " + std::to_string(n) + " job lines, found " +
                                 std::to_string(jobs_read));
    try {
        return Instance(std::move(machine), std::move(duration), std::move(name));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("invalid instance: ") + e.what());
    }
}

std::string write_instance(const Instance& instance) {
    std::ostringstream out;
    out << instance.n_jobs() << " " << instance.n_machines() << "\n";
    for (int j = 0; j < instance.n_jobs(); ++j) {
        for (int p = 0; p < instance.n_machines(); ++p) {
            if (p) out << " ";
            out << instance.machine_of({j, p}) << " " << instance.duration_of({j, p});
        }
        out << "\n";
    }
    return out.str();
}

Instance generate_random_instance(int n_jobs, int n_machines, std::uint64_t seed,
                                  Time duration_lo, Time duration_hi) {
    if (n_jobs < 1 || n_machines < 1)
        throw std::invalid_argument("need at least one job and one machine");
    if (duration_lo < 1 || duration_hi < duration_lo)
        throw std::invalid_argument("invalid duration bounds [" + std::to_string(duration_lo) +
                                    ", " + std::to_string(duration_hi) + "]");

    std::uint64_t state = seed * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL;
    std::vector<std::vector<int>> machine(n_jobs);
    std::vector<std::vector<Time>> duration(n_jobs);
    const std::uint64_t span = static_cast<std::uint64_t>(duration_hi - duration_lo) + 1;

    for (int j = 0; j < n_jobs; ++j) {
        machine[j].resize(n_machines);
        for (int p = 0; p < n_machines; ++p) machine[j][p] = p;
        for (int p = n_machines - 1; p > 0; --p) {
            const auto k = static_cast<int>(bounded_draw(state, static_cast<std::uint64_t>(p) + 1));
            std::swap(machine[j][p], machine[j][k]);
        }
        duration[j].resize(n_machines);
        for (int p = 0; p < n_machines; ++p)
            duration[j][p] = duration_lo + static_cast<Time>(bounded_draw(state, span));
    }

    std::string name = "rand-" + std::to_string(n_jobs) + "x" + std::to_string(n_machines) +
                       "-s" + std::to_string(seed);
    return Instance(std::move(machine), std::move(duration), std::move(name));
}

Time trailer(const Instance& instance, OperationId op, TrailerMode mode,
             const std::vector<OperationId>& done) {
    Time job_tail = 0;
    for (int p = op.position + 1; p < instance.n_machines(); ++p)
        job_tail += instance.duration_of({op.job, p});
    if (mode == TrailerMode::Job) return job_tail;

    std::vector<char> is_done(instance.n_ops(), 0);
    for (const auto& d : done) is_done[instance.op_index(d)] = 1;
    Time machine_tail = 0;
    for (const auto& other : instance.ops_on_machine(instance.machine_of(op))) {
        if (other == op || is_done[instance.op_index(other)]) continue;
        machine_tail += instance.duration_of(other);
    }
    if (mode == TrailerMode::Machine) return machine_tail;
    return std::max(job_tail, machine_tail);
}

} // namespace jobshop
