#pragma once

// Built-in model registry.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcrb/conditions.hpp"
#include "qcrb/model.hpp"

namespace qcrb::fixtures {

using ParamMap = std::map<std::string, double>;

struct Fixture {
  StateModel model;
  std::optional<Cond2PrimeWitness> witness;
  RealVector default_theta;
  ParamMap params;  // defaults merged with overrides
};

struct RegistryEntry {
  std::string name;
  std::string description;
  ParamMap defaults;
  Fixture (*build)(const ParamMap&);
};

/// Registered families:
///   paper-qutrit                 rank-2 qutrit, saturable; params d, arg_d, c1, c2
///   corrigendum-lcss             same state plus the closed-form U(theta) witness
///   theta-independent-support    fixed support, V = B+ S(theta); params seed
///   stationary-basis             V^dagger dV = 0; params k1, k2
///   diag-multinomial             full-rank diagonal family; params dims
///   pure-qubit-amp-phase         pure qubit, not saturable
///   random-rank-r                planted synthetic family at theta = 0;
///                                params n_s, r_plus, p, seed, plant (0 none,
///                                1 commuting ++ blocks, 2 also condition 4)
const std::vector<RegistryEntry>& registry();

std::vector<std::string> names();

/// Throws UnknownModel for unregistered names and InvalidParameter for unknown
/// keys or out-of-range values.
Fixture get(const std::string& name, const ParamMap& params = {});

/// Parses "k=v,k=v".
ParamMap parse_params(const std::string& text);

}  // namespace qcrb::fixtures
