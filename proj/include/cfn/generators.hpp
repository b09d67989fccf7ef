#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cfn/grammar.hpp"
#include "cfn/model.hpp"
#include "cfn/regular.hpp"

namespace cfn {

// Seeded 64-bit Mersenne twister with the standard uniform distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

enum class Family { car_seq, nonogram, parens, market_split };
// dag: global functions kept whole; decomposition: each replaced by its
// bounded-arity network.
enum class Model { dag, decomposition };
enum class ParensMode { soft, hard };

std::optional<Family> parse_family(std::string_view name);
std::string family_name(Family family);

struct GenSpec {
  Family family = Family::car_seq;
  int size = 5;
  int constraints = 1;  // equalities of a market-split instance
  std::uint64_t seed = 0;
  Model model = Model::dag;
  ParensMode parens = ParensMode::soft;
};

// Accepts exactly the 0/1 words whose runs of ones have the given lengths in
// order, separated by at least one zero.
Automaton segment_automaton(const std::vector<int>& lengths);

// Nonempty balanced words over `kinds` bracket pairs; value 2k opens and
// 2k+1 closes pair k.
CnfGrammar bracket_grammar(int kinds);

Cfn gen_car_sequencing(int n, std::uint64_t seed, Model model = Model::dag);
Cfn gen_nonogram(int p, std::uint64_t seed, Model model = Model::dag);
Cfn gen_parentheses(int p, std::uint64_t seed, ParensMode mode = ParensMode::soft);
Cfn gen_market_split(int n, int m, std::uint64_t seed);

Cfn generate(const GenSpec& spec);

}  // namespace cfn
