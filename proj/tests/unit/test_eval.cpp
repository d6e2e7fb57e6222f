// Copyright 2026 The PainSeq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "painseq/errors.hpp"
#include "painseq/eval/metrics.hpp"
#include "painseq/eval/report.hpp"
#include "painseq/eval/voting.hpp"
#include "painseq/nn/init.hpp"

using namespace painseq;
using namespace painseq::eval;
using nn::Tensor;

namespace {

// Frames whose argmaxes are `labels`, each frame 0.6 / 0.2 / 0.2.
Tensor<double> frames_for(const std::vector<int>& labels) {
  Tensor<double> t({labels.size(), 3}, 0.2);
  for (std::size_t i = 0; i < labels.size(); ++i) t.at(i, static_cast<std::size_t>(labels[i])) = 0.6;
  return t;
}

ConfusionMatrix cm_of(std::array<std::array<std::size_t, 3>, 3> rows) {
  ConfusionMatrix cm;
  cm.counts = rows;
  return cm;
}

EvalReport reference_row(std::string model, std::array<double, 3> p, std::array<double, 3> r,
                     std::array<double, 3> f, std::array<double, 3> avg, double acc) {
  EvalReport e;
  e.model = std::move(model);
  e.split = "validation";
  std::array<ClassMetrics, 3> pc{};
  for (std::size_t c = 0; c < 3; ++c) pc[c] = {p[c], r[c], f[c]};
  e.per_class = pc;
  e.macro = ClassMetrics{avg[0], avg[1], avg[2]};
  e.accuracy = acc;
  return e;
}

EvalReport baseline(std::string model, std::string split, double acc) {
  EvalReport e;
  e.model = std::move(model);
  e.split = std::move(split);
  e.accuracy = acc;
  return e;
}

// Reference validation-set numbers for the five models.
std::vector<EvalReport> table1() {
  return {baseline("Video", "validation", 0.40), baseline("fNIRS", "validation", 0.43),
          baseline("Video + fNIRS", "validation", 0.40),
          reference_row("Simple ANN + Voting", {0.10, 0.60, 0.66}, {0.17, 0.67, 0.55},
                    {0.12, 0.63, 0.60}, {0.45, 0.46, 0.45}, 0.59),
          reference_row("LSTM", {0.24, 0.59, 0.71}, {0.42, 0.74, 0.49}, {0.30, 0.65, 0.58},
                    {0.51, 0.55, 0.51}, 0.60)};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("majority vote examples") {
  CHECK(majority_vote(frames_for({2, 2, 2, 2})).label == Label::kHighPain);
  const auto r = majority_vote(frames_for({0, 1, 1, 2, 1}));
  CHECK(r.label == Label::kLowPain);
  CHECK(r.counts == std::array<std::size_t, 3>{1, 3, 1});
  CHECK_FALSE(r.tie_broken);

  // Two frames each for classes 0 and 1; class 1 carries more probability.
  const Tensor<double> tied({4, 3}, {0.5, 0.3, 0.2, 0.5, 0.4, 0.1, 0.1, 0.8, 0.1, 0.2, 0.7, 0.1});
  const std::size_t before = tie_break_count();
  const auto t = majority_vote(tied);
  CHECK(t.label == Label::kLowPain);
  CHECK(t.tie_broken);
  CHECK(tie_break_count() == before + 1);

  // Exact tie in counts and mass goes to the lower index.
  const Tensor<double> exact({2, 3}, {0.6, 0.4, 0.0, 0.4, 0.6, 0.0});
  CHECK(majority_vote(exact).label == Label::kNoPain);
  // Equal probabilities within a frame: argmax is the lowest index.
  CHECK(majority_vote(Tensor<double>({1, 3}, 1.0 / 3.0)).label == Label::kNoPain);

  CHECK_THROWS_AS(majority_vote(Tensor<double>({0, 3})), InvalidInputError);
  CHECK_THROWS_AS(majority_vote(Tensor<double>({2, 4})), DimensionError);
}

TEST_CASE("majority vote agrees with a counting oracle") {
  nn::Rng rng(77);
  std::uniform_int_distribution<int> len(1, 15), cls(0, 2), coarse(0, 4);
  std::size_t ties = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(len(rng));
    Tensor<double> t({n, 3});
    std::vector<std::array<double, 3>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse values force frequent ties in counts, masses and argmaxes.
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        rows[i][k] = 1.0 + coarse(rng);
        s += rows[i][k];
      }
      for (std::size_t k = 0; k < 3; ++k) t.at(i, k) = rows[i][k] /= s;
    }
    const auto got = majority_vote(t);
    ties += got.tie_broken ? 1 : 0;
    REQUIRE(to_index(got.label) == oracle::vote(rows));
  }
  CHECK(ties > 100);
}

TEST_CASE("confusion matrices") {
  std::vector<int> truth, pred;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 5; ++i) truth.push_back(c);
  }
  const auto perfect = confusion(truth, truth);
  CHECK(perfect == cm_of({{{5, 0, 0}, {0, 5, 0}, {0, 0, 5}}}));
  const std::vector<int> zeros(15, 0);
  CHECK(confusion(zeros, truth) == cm_of({{{5, 0, 0}, {5, 0, 0}, {5, 0, 0}}}));

  nn::Rng rng(3);
  std::uniform_int_distribution<int> lab(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a(40), b(40);
    for (auto& v : a) v = lab(rng);
    for (auto& v : b) v = lab(rng);
    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pa, pb;
    for (auto i : perm) {
      pa.push_back(a[i]);
      pb.push_back(b[i]);
    }
    CHECK(confusion(a, b) == confusion(pa, pb));
    CHECK(confusion(a, b).total() == 40);
  }
  CHECK_THROWS_AS(confusion(std::vector<int>{0, 1}, std::vector<int>{0}), DimensionError);
  CHECK_THROWS_AS(confusion(std::vector<int>{3}, std::vector<int>{0}), InvalidLabelError);
}

TEST_CASE("metrics from confusion matrices") {
  const auto all = metrics(cm_of({{{10, 0, 0}, {0, 10, 0}, {0, 0, 10}}}));
  for (const auto& c : *all.per_class) {
    CHECK(c.precision == 1.0);
    CHECK(c.recall == 1.0);
    CHECK(c.f1 == 1.0);
  }
  CHECK(*all.accuracy == 1.0);

  const auto m = metrics(cm_of({{{5, 5, 0}, {0, 10, 0}, {0, 5, 5}}}), "m", "validation");
  const auto& pc = *m.per_class;
  CHECK(pc[0].recall == 0.5);
  CHECK(pc[1].recall == 1.0);
  CHECK(pc[2].recall == 0.5);
  CHECK(pc[0].precision == 1.0);
  CHECK(pc[1].precision == 0.5);
  CHECK(pc[2].precision == 1.0);
  CHECK(*m.accuracy == doctest::Approx(20.0 / 30.0).epsilon(1e-15));
  CHECK(pc[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.macro->precision == doctest::Approx(2.5 / 3.0).epsilon(1e-15));
  CHECK(m.model == "m");
  CHECK(m.split == "validation");

  const auto missing = metrics(cm_of({{{4, 1, 0}, {2, 3, 0}, {0, 0, 0}}}));
  CHECK((*missing.per_class)[2].precision == 0.0);
  CHECK((*missing.per_class)[2].recall == 0.0);
  CHECK((*missing.per_class)[2].f1 == 0.0);
  CHECK(missing.degenerate[2].precision);
  CHECK(missing.degenerate[2].recall);
  CHECK(missing.degenerate[2].f1);
  CHECK_FALSE(missing.degenerate[0].precision);

  CHECK_THROWS_AS(metrics(ConfusionMatrix{}), InvalidInputError);
}

TEST_CASE("metric properties on random confusion matrices") {
  nn::Rng rng(21);
  std::uniform_int_distribution<std::size_t> cell(0, 12);
  const std::array<std::array<std::size_t, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int trial = 0; trial < 300; ++trial) {
    ConfusionMatrix cm;
    for (auto& row : cm.counts) {
      for (auto& v : row) v = cell(rng);
    }
    if (cm.total() == 0) continue;
    const auto e = metrics(cm);
    const auto& pc = *e.per_class;
    std::size_t tp = 0;
    double mp = 0.0, mr = 0.0, mf = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      tp += cm.counts[c][c];
      const std::size_t row = cm.counts[c][0] + cm.counts[c][1] + cm.counts[c][2];
      if (row > 0) CHECK(pc[c].recall == double(cm.counts[c][c]) / double(row));
      for (double v : {pc[c].precision, pc[c].recall, pc[c].f1}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      mp += pc[c].precision;
      mr += pc[c].recall;
      mf += pc[c].f1;
    }
    CHECK(tp == cm.trace());
    CHECK(*e.accuracy == double(cm.trace()) / double(cm.total()));
    CHECK(std::abs(e.macro->precision - mp / 3.0) < 1e-15);
    CHECK(std::abs(e.macro->recall - mr / 3.0) < 1e-15);
    CHECK(std::abs(e.macro->f1 - mf / 3.0) < 1e-15);

    for (const auto& p : perms) {
      ConfusionMatrix q;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) q.counts[p[i]][p[j]] = cm.counts[i][j];
      }
      const auto eq = metrics(q);
      CHECK(*eq.accuracy == *e.accuracy);
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK((*eq.per_class)[p[c]].precision == pc[c].precision);
        CHECK((*eq.per_class)[p[c]].recall == pc[c].recall);
        CHECK((*eq.per_class)[p[c]].f1 == pc[c].f1);
      }
    }
  }
}

TEST_CASE("reference averages are unweighted class means") {
  for (const auto& r : table1()) {
    if (!r.has_class_detail()) continue;
    double p = 0.0, rc = 0.0, f = 0.0;
    for (const auto& c : *r.per_class) {
      p += c.precision / 3.0;
      rc += c.recall / 3.0;
      f += c.f1 / 3.0;
    }
    // Two-decimal rounding in the table bounds the gap by 0.005.
    CHECK(std::abs(p - r.macro->precision) <= 0.005 + 1e-12);
    CHECK(std::abs(rc - r.macro->recall) <= 0.005 + 1e-12);
    CHECK(std::abs(f - r.macro->f1) <= 0.005 + 1e-12);
  }
}

TEST_CASE("text rendering matches the validation-table layout") {
  const auto rows = table1();
  const auto text = render_report(rows, ReportFormat::kText);
  CHECK(text == read_text(std::string(PAINSEQ_FIXTURE_DIR) + "/table1_validation.txt"));
  CHECK(text.find("0.60") != std::string::npos);

  const std::vector<EvalReport> test_rows{
      baseline("Video", "test", 0.40), baseline("fNIRS", "test", 0.43),
      baseline("Video + fNIRS", "test", 0.42), baseline("Simple ANN + Voting", "test", 0.49),
      baseline("LSTM", "test", 0.43)};
  const auto t2 = render_report(test_rows, ReportFormat::kText);
  CHECK(t2 == read_text(std::string(PAINSEQ_FIXTURE_DIR) + "/table2_test.txt"));
  CHECK(t2.find("Precision") == std::string::npos);
}

TEST_CASE("csv and json rendering round trip") {
  auto rows = table1();
  rows.push_back(metrics(cm_of({{{7, 2, 1}, {3, 9, 0}, {0, 4, 8}}}), "LSTM", "test"));
  for (auto fmt : {ReportFormat::kCsv, ReportFormat::kJson}) {
    const auto once = render_report(rows, fmt);
    const auto parsed = fmt == ReportFormat::kCsv ? parse_report_csv(once) : parse_report_json(once);
    REQUIRE(parsed.size() == rows.size());
    CHECK(render_report(parsed, fmt) == once);
    CHECK(*parsed.back().accuracy == *rows.back().accuracy);
    CHECK((*parsed.back().per_class)[1].f1 == (*rows.back().per_class)[1].f1);
    CHECK_FALSE(parsed.front().has_class_detail());
  }
  const auto csv = render_report(rows, ReportFormat::kCsv);
  CHECK(csv.rfind("model,split,class,precision,recall,f1,accuracy\n", 0) == 0);
  CHECK(csv.find("Video,validation,NoPain,,,,0.4\n") != std::string::npos);
  CHECK(render_report(rows, ReportFormat::kJson).find("null") != std::string::npos);

  CHECK_THROWS_AS(parse_report_csv("model,split\nx,y\n"), FormatError);
  CHECK_THROWS_AS(parse_report_json("{\"rows\": 3}"), FormatError);
  CHECK(parse_report_format("json") == ReportFormat::kJson);
  CHECK_THROWS(parse_report_format("xml"));
}
