#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "ergokit/errors.hpp"
#include "ergokit/output.hpp"
#include "ergokit/protocol.hpp"
#include "ergokit/serialize.hpp"

namespace ergokit {
namespace {

TEST(Hash, KnownVectors) {
  // Reference values of 64-bit FNV-1a.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hash_hex(0xabcULL), "0000000000000abc");
}

TEST(FormatDouble, RoundTripsAndNormalisesZero) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.5), "0.5");
  for (double x : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 6.02e23}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(CsvTable, RendersHashHeaderAndQuotes) {
  CsvTable t({"w", "n", "label"});
  t.add_row({0.25, 3LL, std::string("plain")});
  t.add_row({-1.0, 4LL, std::string("a,b")});
  EXPECT_EQ(t.render("00ff"), "# config-hash: 00ff\nw,n,label\n0.25,3,plain\n-1,4,\"a,b\"\n");
  EXPECT_THROW(t.add_row({1.0}), DimensionMismatch);
}

TEST(Files, AtomicWriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "ergokit_output_test" / "nested";
  write_text_file(dir / "x.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "x.txt"), "hello\n");
  write_text_file(dir / "x.txt", "again");
  EXPECT_EQ(read_text_file(dir / "x.txt"), "again");
  EXPECT_FALSE(std::filesystem::exists(dir / "x.txt.tmp"));
  std::filesystem::remove_all(dir.parent_path());
}

TEST(Serialize, PureWeightRoundTrip) {
  const EnergyGrid g(64, 0.25, -8.0);
  const WeightState w = WeightState::pure(gaussian_packet(0.0, 0.5, 0.7, g));
  const Json j = to_json(w);
  EXPECT_EQ(j["form"], "pure");
  const WeightState back = weight_state_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.grid(), g);
  EXPECT_LE(max_abs(back.density_matrix() - w.density_matrix()), 0.0);
}

TEST(Serialize, MixedWeightRoundTrip) {
  const EnergyGrid g(64, 0.25, -8.0);
  const WeightState w = WeightState::mixture(
      g, {{0.3, gaussian_packet(-1.0, 0.0, 0.6, g).amplitudes()}, {0.7, gaussian_packet(1.0, 0.2, 0.6, g).amplitudes()}});
  const Json j = to_json(w);
  EXPECT_EQ(j["form"], "density");
  const WeightState back = weight_state_from_json(Json::parse(j.dump()));
  EXPECT_TRUE(back.is_density());
  EXPECT_LE(max_abs(back.density_matrix() - w.density_matrix()), 1e-15);
}

TEST(Serialize, WorkDistributionRoundTrip) {
  const auto atoms = WorkDistribution::atoms(WorkKind::quasi, {{-0.5, -0.1}, {0.5, 1.1}});
  const WorkDistribution back = work_distribution_from_json(Json::parse(to_json(atoms).dump()));
  EXPECT_EQ(back.kind(), WorkKind::quasi);
  ASSERT_EQ(back.atom_list().size(), 2u);
  EXPECT_EQ(back.atom_list()[0].q, -0.1);
  const auto sampled = WorkDistribution::sampled(WorkKind::tpm, RVector{{0.0, 0.5, 1.0}}, RVector{{0.5, 1.0, 0.5}});
  const WorkDistribution s = work_distribution_from_json(Json::parse(to_json(sampled).dump()));
  EXPECT_FALSE(s.is_atomic());
  EXPECT_EQ(s.values()(1), 1.0);
}

TEST(Serialize, ProtocolReportJsonLines) {
  ProtocolReport a;
  a.delta_energy = 0.1;
  a.delta_variance = -0.25;
  a.ergotropy = {0.5, 0.2, 0.3};
  a.f_wigner = 1.0 / 3.0;
  ProtocolReport b = a;
  b.sigma_e_final = 2.0;
  const std::string text = to_json_lines({a, b});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const auto back = protocol_reports_from_json_lines(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].delta_variance, -0.25);
  EXPECT_EQ(back[0].ergotropy.coherent, 0.3);
  EXPECT_EQ(back[0].f_wigner, 1.0 / 3.0);
  EXPECT_EQ(back[1].sigma_e_final, 2.0);
}

TEST(Serialize, BoundReportRoundTrip) {
  BoundReport r;
  r.bound = 0.3;
  r.achieved = 0.7;
  r.slack = 0.4;
  r.maximizer = 1.4;
  r.converged = false;
  r.masked = true;
  const BoundReport back = bound_report_from_json(Json::parse(to_json(r).dump()));
  EXPECT_EQ(back.bound, 0.3);
  EXPECT_EQ(back.maximizer, 1.4);
  EXPECT_FALSE(back.converged);
  EXPECT_TRUE(back.masked);
}

}  // namespace
}  // namespace ergokit
