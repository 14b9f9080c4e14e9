#include "ergokit/instances.hpp"

#include <fmt/format.h>

#include "ergokit/errors.hpp"
#include "ergokit/parallel.hpp"

namespace ergokit {

std::string to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::gaussian: return "gaussian";
    case WeightFamily::cat: return "cat";
    case WeightFamily::uniform: return "uniform";
  }
  return "?";
}

SystemObservable level_hamiltonian(int dim) {
  if (dim == 2) return SystemObservable::diagonal(RVector{{0.0, 1.0}});
  if (dim == 3) return SystemObservable::diagonal(RVector{{0.0, 1.0, 2.5}});
  throw DomainError(fmt::format("level_hamiltonian: no preset for dimension {}", dim));
}

WeightState random_weight(std::mt19937_64& rng, const EnergyGrid& grid, WeightFamily family) {
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  switch (family) {
    case WeightFamily::gaussian: {
      const double mu = uniform(-1.5, 1.5);
      const double nu = uniform(-3.0, 3.0);
      const double sigma = uniform(0.3, 1.2);
      return WeightState::pure(gaussian_packet(mu, nu, sigma, grid));
    }
    case WeightFamily::cat: {
      const double mu = uniform(0.5, 3.0);
      const double nu = uniform(-2.0, 2.0);
      return WeightState::pure(cat_state(mu, nu, grid));
    }
    case WeightFamily::uniform: {
      const double centre = uniform(-2.0, 2.0);
      const double width = uniform(1.0, 6.0);
      const double nu = uniform(-2.0, 2.0);
      return WeightState::pure(uniform_packet(centre, width, nu, grid));
    }
  }
  throw DomainError("random_weight: unknown family");
}

RandomInstance random_instance(std::mt19937_64& rng, const EnergyGrid& grid, int dim, WeightFamily family) {
  SystemState rho = random_state(dim, rng);
  WeightState w = random_weight(rng, grid, family);
  SystemUnitary v = haar_unitary(dim, rng);
  return {std::move(rho), level_hamiltonian(dim), std::move(w), std::move(v), fmt::format("d{}-{}", dim, to_string(family))};
}

RandomInstance indexed_instance(std::uint64_t seed, std::size_t index, const EnergyGrid& grid) {
  auto rng = stream_rng(seed, index);
  const int dim = index % 2 == 0 ? 2 : 3;
  const auto family = static_cast<WeightFamily>(index % 3);
  RandomInstance inst = random_instance(rng, grid, dim, family);
  inst.label = fmt::format("#{} {}", index, inst.label);
  return inst;
}

}  // namespace ergokit
