#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>

#include "ergokit/parallel.hpp"
#include "ergokit/qubit_phase.hpp"

namespace ergokit {
namespace {

class ThreadEnv {
 public:
  explicit ThreadEnv(const char* value) { setenv("ERGOKIT_THREADS", value, 1); }
  ~ThreadEnv() { unsetenv("ERGOKIT_THREADS"); }
};

TEST(Parallel, BudgetFollowsEnvironment) {
  {
    ThreadEnv env("3");
    EXPECT_EQ(thread_budget(), 3);
  }
  {
    ThreadEnv env("0");
    EXPECT_GE(thread_budget(), 1);
  }
}

TEST(Parallel, EveryIndexVisitedOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, RethrowsItemFailure) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 37) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Parallel, StreamsAreIndependentOfSchedule) {
  auto a = stream_rng(5, 10);
  auto b = stream_rng(5, 10);
  auto c = stream_rng(5, 11);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(stream_rng(6, 10)(), x);
}

TEST(Parallel, SamplingIdenticalAcrossThreadCounts) {
  const EnergyGrid g = EnergyGrid::standard();
  const WeightState w = WeightState::pure(cat_state(2.0, 1.0, g));
  const SystemState rho = SystemState::bloch(0.6, 0.2, 0.1);
  std::vector<PhaseSpacePoint> serial;
  {
    ThreadEnv env("1");
    serial = sample_phase_space(rho, w, 300, 4);
  }
  ThreadEnv env("4");
  const auto threaded = sample_phase_space(rho, w, 300, 4);
  ASSERT_EQ(serial.size(), threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].w, threaded[i].w);
    EXPECT_EQ(serial[i].dvar, threaded[i].dvar);
  }
}

}  // namespace
}  // namespace ergokit
