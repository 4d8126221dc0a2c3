#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "ohmic/commands.hpp"
#include "support.hpp"

using namespace ohmic;
using namespace ohmic::cli;

namespace {

std::size_t column(const Dataset& ds, const std::string& name) {
  for (std::size_t i = 0; i < ds.columns.size(); ++i)
    if (ds.columns[i] == name) return i;
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

double column_max(const Dataset& ds, const std::string& name) {
  const auto c = column(ds, name);
  double m = -1.0;
  for (const auto& r : ds.rows) m = std::max(m, r.values[c]);
  return m;
}

}  // namespace

TEST(Grid, ValuesAndValidation) {
  const auto lin = Grid{0.0, 1.0, 5, Spacing::Linear}.values();
  EXPECT_EQ(lin, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const auto lg = Grid{1e-2, 1e2, 5, Spacing::Log}.values();
  EXPECT_EQ(lg.front(), 1e-2);
  EXPECT_EQ(lg.back(), 1e2);
  EXPECT_NEAR(lg[2], 1.0, 1e-15);
  EXPECT_THROW((Grid{1.0, 1.0, 5, Spacing::Linear}.validate()), UsageError);
  EXPECT_THROW((Grid{0.0, 1.0, 1, Spacing::Linear}.validate()), UsageError);
  EXPECT_THROW((Grid{0.0, 1.0, 5, Spacing::Log}.validate()), UsageError);
  EXPECT_THROW(parse_sweep_param("omega"), UsageError);
  EXPECT_EQ(parse_sweep_param("theta"), SweepParam::Theta);
}

TEST(Csv, FormatAndRoundTrip) {
  Dataset ds;
  ds.name = "demo";
  ds.meta = {{"eta", "0.1"}};
  ds.columns = {"a", "b"};
  ds.rows = {{{1.0 / 3.0, 12345678901.0}, ""}, {{NAN, NAN}, "failed, badly"}};
  const auto text = to_csv(ds);
  EXPECT_NE(text.find("# dataset: demo\n# eta: 0.1\na,b,error\n0.333333333,1.23456789e+10,\n"),
            std::string::npos)
      << text;
  const auto back = parse_csv(text);
  EXPECT_EQ(back.name, "demo");
  EXPECT_EQ(back.meta, ds.meta);
  EXPECT_EQ(back.columns, ds.columns);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].values[0], 0.333333333);
  EXPECT_TRUE(std::isnan(back.rows[1].values[0]));
  EXPECT_EQ(back.rows[1].error, "failed; badly");
  EXPECT_EQ(to_csv(back), text);
}

TEST(Csv, CurveRoundTripsAtEmittedPrecision) {
  const auto ds = cmd_curve(0.3, 1.2, 2.0, Grid{1e-3, 1e2, 31, Spacing::Log});
  const auto back = parse_csv(to_csv(ds));
  ASSERT_EQ(back.rows.size(), ds.rows.size());
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    for (std::size_t j = 0; j < ds.columns.size(); ++j) {
      EXPECT_EQ(format_number(back.rows[i].values[j]), format_number(ds.rows[i].values[j]));
    }
  }
}

TEST(Json, SnakeCaseKeysAndNulls) {
  Dataset ds;
  ds.name = "x";
  ds.columns = {"tau_opt"};
  ds.rows = {{{NAN}, "boom"}};
  const auto j = to_json(ds);
  EXPECT_TRUE(j["rows"][0]["tau_opt"].is_null());
  EXPECT_EQ(j["rows"][0]["error"], "boom");
  const auto o = to_json(find_optimum(400, 1, 0));
  for (const char* k : {"tau_opt", "q_opt", "gamma_opt", "short_time_regime", "method"}) {
    EXPECT_TRUE(o.contains(k)) << k;
  }
}

TEST(Curve, ZeroTimeRowAndTemperatureBoost) {
  const auto cold = cmd_curve(0.1, 1.0, 0.0, Grid{0.0, 20.0, 201, Spacing::Linear});
  EXPECT_EQ(cold.rows.front().values[column(cold, "q")], 0.0);
  EXPECT_FALSE(cold.has_errors());
  const auto hot = cmd_curve(0.1, 1.0, 100.0, Grid{1e-3, 1e2, 201, Spacing::Log});
  const auto cold_log = cmd_curve(0.1, 1.0, 0.0, Grid{1e-3, 1e2, 201, Spacing::Log});
  EXPECT_GT(column_max(hot, "q"), column_max(cold_log, "q"));
}

TEST(Curve, StrongCouplingPlateau) {
  const Grid grid{1e-3, 10.0, 401, Spacing::Log};
  const double q200 = column_max(cmd_curve(200, 1, 0, grid), "q");
  const double q400 = column_max(cmd_curve(400, 1, 0, grid), "q");
  EXPECT_NEAR(q200, q400, 5e-3);
}

TEST(Curve, RowErrorsAreRecorded) {
  QuadratureConfig quad;
  const auto ds = cmd_curve(0.1, 1.0, 0.0, Grid{1e-3, 1.0, 3, Spacing::Log}, quad);
  EXPECT_FALSE(ds.has_errors());
  // A curve at an invalid s fails on every row but still returns all rows.
  const auto bad = cmd_curve(0.1, -1.0, 0.0, Grid{1e-3, 1.0, 3, Spacing::Log}, quad);
  ASSERT_EQ(bad.rows.size(), 3u);
  for (const auto& r : bad.rows) {
    EXPECT_FALSE(r.error.empty());
    EXPECT_TRUE(std::isnan(r.values.back()));
  }
}

TEST(Curve, DimensionfulMatchesScaled) {
  const auto scaled = cmd_curve(0.3, 1.5, 0.4, Grid{1e-2, 1e2, 21, Spacing::Log});
  const OhmicSpectrum spec(0.3, 1.5, 2.0);
  const auto dim = cmd_curve_dimensionful(spec, 0.8, Grid{5e-3, 50.0, 21, Spacing::Log});
  for (std::size_t i = 0; i < scaled.rows.size(); ++i) {
    EXPECT_LE(test::rel_err(dim.rows[i].values[column(dim, "q")],
                            scaled.rows[i].values[column(scaled, "q")]),
              1e-12);
  }
}

TEST(Sweep, EtaGivesMonotoneOptimum) {
  SweepSpec spec;
  spec.vary = SweepParam::Eta;
  spec.grid = Grid{1e-2, 1e3, 26, Spacing::Log};
  spec.s = 1.0;
  const auto ds = cmd_sweep(spec);
  const auto c = column(ds, "q_opt");
  for (std::size_t i = 1; i < ds.rows.size(); ++i) {
    EXPECT_GE(ds.rows[i].values[c], ds.rows[i - 1].values[c] - 1e-4);
    EXPECT_GT(ds.rows[i].values[0], ds.rows[i - 1].values[0]);  // grid order kept
  }
}

TEST(Sweep, OhmicityReachesSaturationAtWeakCoupling) {
  SweepSpec spec;
  spec.vary = SweepParam::S;
  spec.grid = Grid{0.1, 10.0, 34, Spacing::Linear};
  spec.eta = 0.01;
  const auto ds = cmd_sweep(spec);
  EXPECT_NEAR(ds.rows.back().values[column(ds, "q_opt")], q_max(), 5e-3);
}

TEST(Sweep, TemperatureConvergesForAllOhmicities) {
  for (double s : {0.5, 1.0, 2.0}) {
    SweepSpec spec;
    spec.vary = SweepParam::Theta;
    spec.grid = Grid{1e3, 1e5, 3, Spacing::Log};
    spec.eta = 0.1;
    spec.s = s;
    const auto ds = cmd_sweep(spec);
    EXPECT_NEAR(ds.rows.back().values[column(ds, "q_opt")], 0.1619, 2e-3) << s;
  }
}

TEST(Sweep, TauProducesCurveRows) {
  SweepSpec spec;
  spec.vary = SweepParam::Tau;
  spec.grid = Grid{0.0, 2.0, 5, Spacing::Linear};
  const auto ds = cmd_sweep(spec);
  EXPECT_EQ(ds.columns, (std::vector<std::string>{"eta", "s", "theta", "tau", "q", "gamma"}));
}

TEST(Enhancement, DecreasingAndCriticalBelowOne) {
  const auto r = cmd_enhancement({1.0}, Grid{1e-2, 1.0, 9, Spacing::Log});
  const auto c = column(r, "r");
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_LT(r.rows[i].values[c], r.rows[i - 1].values[c]);
  }
  const auto crit = cmd_critical_eta(Grid{0.3, 3.0, 4, Spacing::Linear});
  EXPECT_FALSE(crit.has_errors());
  for (const auto& row : crit.rows) EXPECT_LT(row.values[1], 1.0);
}

TEST(Figure, IdsAndUnknown) {
  const auto ids = figure_ids();
  EXPECT_EQ(ids, (std::vector<std::string>{"1a", "1b", "2a", "2b", "3", "4a", "4b", "5a", "5b",
                                           "5c", "5d", "6a", "6b"}));
  try {
    cmd_figure("7z");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("1a, 1b"), std::string::npos);
  }
}

TEST(Figure, PanelParameters) {
  const auto a = cmd_figure("1a");
  std::set<double> etas;
  for (const auto& r : a.rows) {
    etas.insert(r.values[0]);
    EXPECT_EQ(r.values[1], 1.0);
    EXPECT_EQ(r.values[2], 0.0);
  }
  EXPECT_EQ(etas, (std::set<double>{0.1, 0.5, 1.0}));
  EXPECT_FALSE(a.has_errors());

  const auto b = cmd_figure("4b");
  std::set<double> thetas;
  for (const auto& r : b.rows) thetas.insert(r.values[2]);
  EXPECT_EQ(thetas, (std::set<double>{200.0, 300.0, 400.0}));
}

TEST(Figure, StrongerCouplingDipsNearUnitTemperature) {
  const auto ds = cmd_figure("5b");
  double min_q = 1.0, min_theta = 0.0, first = -1.0, last = 0.0;
  for (const auto& r : ds.rows) {
    if (r.values[0] != 0.5) continue;
    const double q = r.values[column(ds, "q_opt")];
    if (first < 0.0) first = q;
    last = q;
    if (q < min_q) {
      min_q = q;
      min_theta = r.values[2];
    }
  }
  EXPECT_GT(min_theta, 0.1);
  EXPECT_LT(min_theta, 10.0);
  EXPECT_LT(min_q, first - 1e-2);
  EXPECT_LT(min_q, last - 1e-2);
}
