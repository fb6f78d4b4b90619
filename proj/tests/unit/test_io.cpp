#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ifbs/io.hpp"

using namespace ifbs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ifbs_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(ModelJson, RoundTrip) {
  const PerceptionMDP m = build_three_state(0.9, 2.5);
  const PerceptionMDP back = io::model_from_json(io::model_to_json(m));
  EXPECT_EQ(back.transition_tensor(), m.transition_tensor());
  EXPECT_EQ(back.cost_matrix(), m.cost_matrix());
  EXPECT_EQ(back.gamma(), 0.9);
  EXPECT_EQ(back.beta(), 2.5);
}

TEST(ModelJson, ShapeErrors) {
  io::json j = io::model_to_json(build_three_state());
  j["transition"][1].erase(0);
  EXPECT_THROW(io::model_from_json(j), io::ParseError);
  j = io::model_to_json(build_three_state());
  j.erase("gamma");
  EXPECT_THROW(io::model_from_json(j), io::ParseError);
  j = io::model_to_json(build_three_state());
  j["cost"] = "oops";
  EXPECT_THROW(io::model_from_json(j), io::ParseError);
}

TEST(ModelJson, FileRoundTripAndBadFile) {
  const fs::path p = scratch("model.json");
  io::write_json_file(p, io::model_to_json(build_three_state()));
  EXPECT_EQ(io::model_from_json(io::read_json_file(p)).num_states(), 3u);
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << "{ not json";
  EXPECT_THROW(io::read_json_file(bad), io::ParseError);
  EXPECT_THROW(io::read_json_file(scratch("missing.json")), io::ParseError);
}

TEST(GridJson, RoundTrip) {
  const GridworldConfig g = mars_layout();
  const GridworldConfig back = io::gridworld_from_json(io::gridworld_to_json(g));
  EXPECT_EQ(back.width, g.width);
  EXPECT_EQ(back.start, g.start);
  EXPECT_EQ(back.goals, g.goals);
  EXPECT_EQ(back.rocks, g.rocks);
  EXPECT_EQ(back.slip_mass, g.slip_mass);
}

TEST(BeliefJson, FullPrecisionRoundTrip) {
  const std::vector<Belief> bs{Belief::normalized({1.0, 2.0, 4.0}), Belief::vertex(3, 2)};
  const io::json j = io::json::parse(io::beliefs_to_json(bs).dump());
  EXPECT_EQ(io::beliefs_from_json(j), bs);
  EXPECT_THROW(io::beliefs_from_json(io::json::parse("[[0.5, 0.6]]")), io::ParseError);
}

TEST(Csv, ValuesActionsAlphaRoundTrip) {
  const std::vector<double> v{0.1, 1.0 / 3.0, 1e-300, 12345.678};
  io::write_values_csv(scratch("v.csv"), v);
  EXPECT_EQ(io::read_values_csv(scratch("v.csv")), v);

  const std::vector<std::size_t> acts{0, 2, 1};
  io::write_actions_csv(scratch("a.csv"), acts);
  EXPECT_EQ(io::read_actions_csv(scratch("a.csv")), acts);

  const std::vector<SparseAlpha> alpha{SparseAlpha{{0, 4}, {0.25, 0.75}}, SparseAlpha{{3}, {1.0}}};
  io::write_alpha_csv(scratch("al.csv"), alpha);
  const auto back = io::read_alpha_csv(scratch("al.csv"), 2);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].index, alpha[0].index);
  EXPECT_EQ(back[0].weight, alpha[0].weight);
  EXPECT_EQ(back[1].index, alpha[1].index);
  EXPECT_THROW(io::read_alpha_csv(scratch("al.csv"), 1), io::ParseError);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.0, 1e-17, 0.95}) {
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Csv, ResidenceSlices) {
  ResidenceHistogram h;
  h.trials = 2;
  h.fractions = {{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}};
  io::write_residence_csv(scratch("r.csv"), h, {1, 7});
  std::ifstream in(scratch("r.csv"));
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(all, "time,state,fraction\n1,0,0.5\n1,1,0.5\n");
}
