#include <gtest/gtest.h>

#include <string>

#include "incdual/incdual.h"

namespace {

std::string data_path(const char* name) { return std::string(INCDUAL_DATA_DIR) + "/" + name; }

incdual_problem* load(const char* name) {
  incdual_problem* p = nullptr;
  EXPECT_EQ(incdual_problem_load(data_path(name).c_str(), &p), INCDUAL_OK) << incdual_last_error();
  return p;
}

}  // namespace

TEST(CApiTest, SolveAndDual) {
  incdual_problem* p = load("worked_n2.json");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(incdual_problem_kind(p), 0);
  EXPECT_EQ(incdual_problem_dim(p), 1);
  incdual_options o;
  incdual_options_default(&o);
  incdual_result* r = nullptr;
  ASSERT_EQ(incdual_solve(p, &o, &r), INCDUAL_OK);
  EXPECT_NEAR(incdual_result_value(r), -1.0, 1e-8);
  EXPECT_EQ(incdual_result_status(r), 0);
  incdual_result_free(r);
  ASSERT_EQ(incdual_dual(p, &o, &r), INCDUAL_OK);
  EXPECT_NEAR(incdual_result_value(r), -1.0, 1e-8);
  EXPECT_NE(std::string(incdual_result_output(r)).size(), 0u);
  incdual_result_free(r);
  incdual_problem_free(p);
}

TEST(CApiTest, CertifyWithDualFile) {
  incdual_problem* p = load("worked_n2.json");
  incdual_options o;
  incdual_options_default(&o);
  const std::string good = data_path("worked_n2_dual.json"), bad = data_path("worked_n2_dual_perturbed.json");
  incdual_result* r = nullptr;
  o.dual_path = good.c_str();
  ASSERT_EQ(incdual_certify(p, &o, &r), INCDUAL_OK);
  EXPECT_TRUE(incdual_result_ok(r));
  incdual_result_free(r);
  o.dual_path = bad.c_str();
  ASSERT_EQ(incdual_certify(p, &o, &r), INCDUAL_OK);
  EXPECT_FALSE(incdual_result_ok(r));
  EXPECT_EQ(incdual_result_status(r), 3);
  incdual_result_free(r);
  incdual_problem_free(p);
}

TEST(CApiTest, ErrorStatuses) {
  incdual_problem* p = nullptr;
  EXPECT_EQ(incdual_problem_parse("{", &p), INCDUAL_E_PARSE);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(incdual_last_error()).size(), 0u);
  EXPECT_EQ(incdual_problem_parse("{\"kind\": \"discrete\"}", &p), INCDUAL_E_SCHEMA);
  EXPECT_EQ(incdual_problem_load("/nonexistent/problem.json", &p), INCDUAL_E_IO);
  EXPECT_NE(std::string(incdual_last_error()).find("/nonexistent/problem.json"), std::string::npos);
  EXPECT_EQ(incdual_solve(nullptr, nullptr, nullptr), INCDUAL_E_ARGUMENT);
  EXPECT_NE(std::string(incdual_status_name(INCDUAL_E_BUDGET)).size(), 0u);
}

TEST(CApiTest, EmitRoundTrip) {
  incdual_problem* p = load("double_integrator.json");
  char* text = nullptr;
  ASSERT_EQ(incdual_problem_emit(p, &text), INCDUAL_OK);
  incdual_problem* q = nullptr;
  ASSERT_EQ(incdual_problem_parse(text, &q), INCDUAL_OK);
  char* again = nullptr;
  ASSERT_EQ(incdual_problem_emit(q, &again), INCDUAL_OK);
  EXPECT_STREQ(text, again);
  EXPECT_EQ(incdual_problem_kind(q), 1);
  incdual_string_free(text);
  incdual_string_free(again);
  incdual_problem_free(p);
  incdual_problem_free(q);
}

TEST(CApiTest, NumericHelpers) {
  const double in[] = {1, 1, 1};
  double out[3] = {};
  ASSERT_EQ(incdual_pascal(2, 0.5, in, 3, out), INCDUAL_OK);
  EXPECT_EQ(out[0], 3.0);
  EXPECT_EQ(out[1], 1.5);
  EXPECT_EQ(out[2], 0.25);
  EXPECT_NE(incdual_pascal(2, 0.5, in, 2, out), INCDUAL_OK);
  const double lo[] = {-1, 0}, hi[] = {1, 2}, d[] = {1, -1};
  double w = 0;
  ASSERT_EQ(incdual_box_support(lo, hi, d, 2, &w), INCDUAL_OK);
  EXPECT_EQ(w, 1.0);
}

TEST(CApiTest, SweepCsv) {
  incdual_problem* p = load("double_integrator.json");
  incdual_options o;
  incdual_options_default(&o);
  o.format = INCDUAL_FORMAT_CSV;
  incdual_result* r = nullptr;
  ASSERT_EQ(incdual_sweep(p, &o, &r), INCDUAL_OK) << incdual_last_error();
  const std::string csv = incdual_result_output(r);
  EXPECT_EQ(csv.rfind("delta,primal,dual,gap", 0), 0u);
  EXPECT_NE(csv.find("\n0.25,-0.1875,"), std::string::npos);
  incdual_result_free(r);
  incdual_problem_free(p);
}
