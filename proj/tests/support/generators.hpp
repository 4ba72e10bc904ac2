#ifndef XFD_TESTS_GENERATORS_HPP
#define XFD_TESTS_GENERATORS_HPP

#include <random>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"

namespace xfd::testgen {

/// Random valid atomic spec: up to `max_states` states (initial listed
/// first) and `max_messages` distinct message labels, deterministic tables,
/// ids 1-based in declaration order. Always passes validate_atomic.
AtomicSpec random_atomic(std::mt19937& rng, int max_states = 8, int max_messages = 5);

/// Like random_atomic but with strictly positive finite timeouts, so that
/// simulations cannot collapse into zero-time loops.
AtomicSpec random_simulatable_atomic(std::mt19937& rng, const std::string& name);

/// Random valid coupled spec over explicit child port interfaces.
CoupledSpec random_coupled(std::mt19937& rng, int max_children = 4);

/// A registry with a two-level hierarchy: Root { InnerN..., atomics... },
/// randomly coupled, valid, and free of zero-time loops.
ModelRegistry random_two_level_registry(std::mt19937& rng, std::string& root_name_out);

}  // namespace xfd::testgen

#endif
