#pragma once

#include "enthier/classify.hpp"
#include "enthier/families.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// End-to-end pipelines and the property suites behind `enthier verify`.
namespace enthier {

struct TripartiteReport {
    TripleClass cls;
    std::array<std::size_t, 3> ranks{};
    RankBounds bounds;
    TableReport table;
};

/// classify_tripartite, tensor_rank_bounds and check_table_constraints in one pass.
TripartiteReport analyze_tripartite(const PureState& psi, const Certificate* cert = nullptr,
                                    const CriteriaOptions& opts = {});

struct TableCase {
    std::string name;
    FamilyState family;
};

/// One construction per nonempty essential subset, plus the boundary
/// (D,M,M) product with equal local ranks.
std::vector<TableCase> table1_cases(std::uint64_t seed = 0);

/// sum_i sqrt(p_i) |i>^{(x) n} |b_{i,n}> ... |b_{i,N-1}> with random p and b.
PureState ghz_form_instance(std::size_t parties, std::size_t n, std::size_t terms, std::uint64_t seed);

/// lemma2_random with 2..4 terms and 2..4 dimensional b vectors drawn from the seed.
FamilyState random_lemma2(std::uint64_t seed, std::uint64_t index);

struct SuiteOptions {
    std::size_t trials = 0;  ///< 0 selects the suite default
    std::uint64_t seed = 0;
    double tol = kTau;
    std::string dump_dir;  ///< conjecture counterexamples go here when nonempty
};

struct SuiteResult {
    std::string name;
    bool gating = true;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> lines;

    bool passed() const noexcept { return failures == 0; }
    void check(bool ok, const std::string& what);
    void note(const std::string& what) { lines.push_back(what); }
};

const std::vector<std::string>& suite_names();
/// Throws Error for an unknown suite name.
SuiteResult run_suite(std::string_view name, const SuiteOptions& opts = {});

}  // namespace enthier
