#pragma once

#include "toeplab/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace toeplab {

enum class OracleModel { permutations, odd_even, odd_odd, words };

std::string model_name(OracleModel m);
OracleModel parse_model(const std::string& name);

struct OracleTable {
    int k = 0;
    OracleModel model = OracleModel::permutations;
    int alpha = 0; // words only
    std::map<int, std::uint64_t> counts; // L -> count
    std::uint64_t total = 0;

    // P(L <= n).
    Rational cumulative(int n) const;
};

// Enumeration workers: TOEPLAB_THREADS when set to a positive integer, else the
// hardware concurrency.
int thread_count();

// Length of the longest strictly (or weakly) increasing subsequence.
int longest_increasing(const std::vector<int>& seq, bool strict = true);

// S_k, k <= 9.
OracleTable lis_distribution(int k);

// Signed permutations pi(-j) = -pi(j) of -k..-1, 1..k (odd_even) or -k..k with
// pi(0) = 0 (odd_odd), scored on the sequence pi(-k), ..., pi(k). 2k (+1) <= 11.
OracleTable lis_odd_distribution(int k, bool odd_length);

// Words of length k over alpha letters scored by weakly increasing subsequences;
// alpha^k <= 10^7.
OracleTable word_lis_distribution(int k, int alpha);

// Standard Young tableaux of shape lambda by the hook-length formula.
std::uint64_t standard_tableaux(const std::vector<int>& lambda);
// Semistandard tableaux of shape lambda with entries <= alpha by the hook-content formula.
std::uint64_t semistandard_tableaux(const std::vector<int>& lambda, int alpha);
std::vector<std::vector<int>> partitions(int k);

// Counts grouped by the first row: sum of (f^lambda)^2 for permutations and
// f^lambda times the semistandard count for words.
OracleTable rsk_lis_distribution(int k);
OracleTable rsk_word_distribution(int k, int alpha);

struct IdentityEntry {
    int k = 0;
    Rational combinatorial, determinant;
    bool ok = false;
};

struct IdentityReport {
    OracleModel model = OracleModel::permutations;
    int n = 0;
    int alpha = 0;
    std::vector<IdentityEntry> entries;
    bool passed = true;
};

// Coefficientwise comparison of the generating identities for k = 0..k_max:
//   permutations: [t^2k] tau_n(e^{t(z + 1/z)}) = P(L <= n) / k!,
//   odd_even:     [s^2k] tau_n(e^{s(z^2 + z^-2)}) = 2^k P(L <= n) / k!,
//   odd_odd:      [s^2k] 1/4 d^2/dt^2 (tau_n(+s) + tau_n(-s))|_{t=0} = 2^k P(L <= n) / k!,
//   words:        [s^k] tau_n((1 + z)^alpha e^{-s/z}) = (-alpha)^k P(L <= n) / k!.
// Raises IdentityFailure on the first mismatch when asked to.
IdentityReport generating_identity_check(OracleModel model, int n, int k_max, int alpha = 0,
                                         bool throw_on_mismatch = true);

} // namespace toeplab
