#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "jobshop/one_machine.hpp"

using namespace jobshop;

namespace {

// exhaustive reference over all n! sequences
Time enumerate_lmax(const OneMachineProblem& pb) {
    std::vector<int> perm(pb.n_jobs());
    std::iota(perm.begin(), perm.end(), 0);
    Time best = std::numeric_limits<Time>::max();
    do {
        Time t = 0, l = std::numeric_limits<Time>::min();
        for (const int j : perm) {
            t = std::max(t, pb.release[j]) + pb.processing[j];
            l = std::max(l, t - pb.due[j]);
        }
        best = std::min(best, l);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

OneMachineProblem random_problem(std::uint64_t seed, int n) {
    std::uint64_t s = seed * 0x9e3779b97f4a7c15ULL + 12345;
    auto next = [&s]() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    };
    OneMachineProblem pb;
    for (int j = 0; j < n; ++j) {
        pb.release.push_back(static_cast<Time>(next() % 50));
        pb.processing.push_back(static_cast<Time>(1 + next() % 20));
        pb.due.push_back(static_cast<Time>(next() % 90) - 20);
    }
    return pb;
}

} // namespace

TEST_CASE("two jobs: the later-released, tighter job goes first") {
    OneMachineProblem pb{{0, 1}, {3, 2}, {7, 4}};
    const auto res = solve_one_machine_lmax(pb);
    CHECK(res.l_max == -1);
    REQUIRE(res.sequence.size() == 2);
    CHECK(res.sequence[0] == 1);
    CHECK(res.sequence[1] == 0);
}

TEST_CASE("single job") {
    OneMachineProblem pb{{2}, {3}, {5}};
    const auto res = solve_one_machine_lmax(pb);
    CHECK(res.l_max == 0);
    CHECK(res.sequence == std::vector<int>{0});
}

TEST_CASE("no release dates: EDD order is optimal") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto pb = random_problem(seed, 5);
        std::fill(pb.release.begin(), pb.release.end(), 0);
        const auto res = solve_one_machine_lmax(pb);

        std::vector<int> edd(5);
        std::iota(edd.begin(), edd.end(), 0);
        std::sort(edd.begin(), edd.end(), [&](int a, int b) {
            if (pb.due[a] != pb.due[b]) return pb.due[a] < pb.due[b];
            return a < b;
        });
        Time t = 0, l = std::numeric_limits<Time>::min();
        for (const int j : edd) {
            t += pb.processing[j];
            l = std::max(l, t - pb.due[j]);
        }
        CHECK(res.l_max == l);
    }
}

TEST_CASE("branch and bound equals enumeration on random problems") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7); // up to 8 jobs
        const auto pb = random_problem(seed, n);
        const auto res = solve_one_machine_lmax(pb);
        CHECK(res.l_max == enumerate_lmax(pb));

        // the reported sequence realizes the reported value
        Time t = 0, l = std::numeric_limits<Time>::min();
        for (const int j : res.sequence) {
            t = std::max(t, pb.release[j]) + pb.processing[j];
            l = std::max(l, t - pb.due[j]);
        }
        CHECK(l == res.l_max);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_one_machine_lmax({}), std::invalid_argument);
    CHECK_THROWS_AS(solve_one_machine_lmax({{-1}, {2}, {3}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_one_machine_lmax({{0, 1}, {2}, {3, 4}}), std::invalid_argument);
}
