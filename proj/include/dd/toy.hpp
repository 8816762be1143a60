#pragma once

#include <string>
#include <vector>

#include "dd/parse_tag.hpp"

namespace dd {

// Built-in two-word instance whose joint relaxation has a fractional LP
// optimum: the dual bottoms out at 2 while the best agreeing pair scores 0,
// so the untightened run oscillates forever and a single added tag-bigram
// constraint closes the gap.
//
// Trees (by tag sequence) score f = [1, 1, 2] over (a,b), (b,a), (c,c);
// tag sequences score g = [1, 1, -2] over (a,a), (b,b), (c,c).
struct ToyInstance {
  Grammar grammar;
  TagModel model;
  std::vector<std::string> sentence;
};

// Constructs and validates the instance: exactly the six structures above
// with those scores, and the indicator expectations that make the half-half
// mixture over the first two structure pairs feasible. Throws on mismatch.
ToyInstance makeToyInstance();

// The constraint that eliminates the fractional optimum: bigram (a, b) at the
// first position pair.
BigramTriple toyTighteningConstraint();

}  // namespace dd
