#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ergokit/hilbert.hpp"
#include "ergokit/weight.hpp"

namespace ergokit {

enum class WeightFamily { gaussian, cat, uniform };

std::string to_string(WeightFamily f);

// Diagonal Hamiltonian with commensurate, nondegenerate levels:
// (0, 1) for a qubit, (0, 1, 2.5) for a qutrit.
SystemObservable level_hamiltonian(int dim);

// Random packet of the given family. Parameters are drawn so that the
// packet plus the largest level shift stays clear of the guard band.
WeightState random_weight(std::mt19937_64& rng, const EnergyGrid& grid, WeightFamily family);

struct RandomInstance {
  SystemState rho;
  SystemObservable h;
  WeightState w;
  SystemUnitary v;
  std::string label;
};

RandomInstance random_instance(std::mt19937_64& rng, const EnergyGrid& grid, int dim, WeightFamily family);

// Instance `index` of a seeded batch: dimension alternates 2, 3 and the weight
// family cycles through all three, each on its own RNG stream.
RandomInstance indexed_instance(std::uint64_t seed, std::size_t index, const EnergyGrid& grid);

}  // namespace ergokit
