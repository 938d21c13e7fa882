#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "secidx/model.hpp"

// Enumeration of fixed-size sensor subsets in lexicographic order. Every
// search has a serial reference path and an OpenMP path; both return the
// lexicographically smallest match so results do not depend on scheduling.
namespace secidx::subsets {

enum class Execution { Serial, Parallel };

/// Parallel unless overridden by set_default_execution.
Execution default_execution();
void set_default_execution(Execution exec);

std::uint64_t binomial(std::size_t n, std::size_t k);

/// The rank-th k-subset of {1..n} in lexicographic order.
SensorSet unrank(std::size_t n, std::size_t k, std::uint64_t rank);

/// Advance to the next k-subset of {1..n} in lexicographic order. False after the last one.
bool next_combination(SensorSet& subset, std::size_t n);

SensorSet complement(const SensorSet& subset, std::size_t n);

/// Predicates may be called concurrently and must not mutate shared state.
using Predicate = std::function<bool(const SensorSet&)>;

std::optional<SensorSet> find_first(std::size_t n, std::size_t k, const Predicate& pred,
                                    Execution exec = default_execution());

std::vector<SensorSet> find_all(std::size_t n, std::size_t k, const Predicate& pred,
                                Execution exec = default_execution());

}  // namespace secidx::subsets
