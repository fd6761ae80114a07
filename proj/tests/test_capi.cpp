#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <dicke/dicke.h>

namespace {

struct StringGuard {
  char* ptr = nullptr;
  ~StringGuard() { dk_string_free(ptr); }
};

}  // namespace

TEST_CASE("version and error strings") {
  const char* v = dk_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) > 0);

  dk_state* s = nullptr;
  CHECK(dk_state_noisy_dicke(3, 0.0, 0.2, &s) == DK_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(std::strlen(dk_last_error()) > 0);
}

TEST_CASE("state construction, negativities, witness") {
  dk_state* s = nullptr;
  REQUIRE(dk_state_noisy_dicke(2, 0.0, 0.2, &s) == DK_OK);
  REQUIRE(s != nullptr);

  double n[3] = {0, 0, 0};
  CHECK(dk_state_negativities(s, n) == DK_OK);
  CHECK(std::abs(n[0] - 0.4770) < 5e-4);
  CHECK(std::abs(n[1] - 0.6293) < 5e-4);
  CHECK(std::abs(n[2] - 0.3875) < 5e-4);

  // alpha = 0.2 sits just above the 0.1920 detection threshold, so the
  // witness misses this entangled state: <W> = (sqrt(3) - 5/2) + 4 alpha.
  double w = 0.0;
  CHECK(dk_state_witness_expectation(s, &w) == DK_OK);
  CHECK(w == doctest::Approx(std::sqrt(3.0) - 2.5 + 0.8).epsilon(1e-9));

  int physical = 0;
  CHECK(dk_state_is_physical(s, 1e-9, &physical) == DK_OK);
  CHECK(physical == 1);
  dk_state_free(s);

  dk_state* mixed = nullptr;
  REQUIRE(dk_state_maximally_mixed(&mixed) == DK_OK);
  double nm[3];
  CHECK(dk_state_negativities(mixed, nm) == DK_OK);
  CHECK(std::abs(nm[0]) < 1e-9);
  dk_state_free(mixed);

  double alpha = 0.0;
  CHECK(dk_witness_threshold(2, &alpha) == DK_OK);
  CHECK(std::abs(alpha - 0.1920) < 1e-4);

  CHECK(dk_state_noisy_dicke(2, 0.0, -0.1, &s) == DK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("dataset lifecycle through the C API") {
  dk_state* s = nullptr;
  REQUIRE(dk_state_noisy_dicke(2, 0.0, 0.2, &s) == DK_OK);

  dk_dataset* d = nullptr;
  REQUIRE(dk_dataset_simulate("collective_xy", s, 1000, 7, &d) == DK_OK);

  StringGuard json;
  REQUIRE(dk_dataset_to_json(d, &json.ptr) == DK_OK);
  const std::string text = json.ptr;
  CHECK(text.find("\"design_id\"") != std::string::npos);
  CHECK(text.find("\"settings\"") != std::string::npos);

  dk_dataset* back = nullptr;
  REQUIRE(dk_dataset_from_json(text.c_str(), &back) == DK_OK);
  StringGuard json2;
  REQUIRE(dk_dataset_to_json(back, &json2.ptr) == DK_OK);
  CHECK(text == json2.ptr);

  dk_dataset* first = nullptr;
  dk_dataset* second = nullptr;
  REQUIRE(dk_dataset_split(d, 0.5, 3, &first, &second) == DK_OK);
  REQUIRE(first != nullptr);
  REQUIRE(second != nullptr);

  dk_dataset* bad = nullptr;
  CHECK(dk_dataset_simulate("no_such_design", s, 100, 1, &bad) ==
        DK_ERR_INVALID_ARGUMENT);
  CHECK(dk_dataset_from_json("not json", &bad) == DK_ERR_CONFIG);

  dk_dataset_free(first);
  dk_dataset_free(second);
  dk_dataset_free(back);
  dk_dataset_free(d);
  dk_state_free(s);
}

TEST_CASE("pseudostates flow into M2 and the witness but not negativities") {
  dk_state* s = nullptr;
  REQUIRE(dk_state_noisy_dicke(2, 0.0, 0.2, &s) == DK_OK);
  dk_dataset* d = nullptr;
  REQUIRE(dk_dataset_simulate("collective_xy", s, 200, 4, &d) == DK_OK);

  dk_state* pseudo = nullptr;
  REQUIRE(dk_state_pseudostate_from_counts(d, &pseudo) == DK_OK);

  double w = 0.0;
  CHECK(dk_state_witness_expectation(pseudo, &w) == DK_OK);

  double n[3];
  CHECK(dk_state_negativities(pseudo, n) == DK_ERR_INVALID_ARGUMENT);

  dk_family* m2 = nullptr;
  REQUIRE(dk_family_m2(2, 0.0, pseudo, &m2) == DK_OK);
  dk_family_free(m2);
  dk_state_free(pseudo);
  dk_dataset_free(d);
  dk_state_free(s);
}

TEST_CASE("fit and rank through the C API") {
  dk_state* s = nullptr;
  REQUIRE(dk_state_noisy_dicke(2, 0.0, 0.2, &s) == DK_OK);
  dk_dataset* d = nullptr;
  REQUIRE(dk_dataset_simulate("collective_xy", s, 1000, 21, &d) == DK_OK);

  dk_family* m1 = nullptr;
  REQUIRE(dk_family_m1(2, 0.0, 0, &m1) == DK_OK);

  StringGuard fit;
  REQUIRE(dk_fit(m1, d, 0.01, 1e-6, &fit.ptr) == DK_OK);
  const std::string fit_text = fit.ptr;
  CHECK(fit_text.find("\"theta_hat\"") != std::string::npos);
  CHECK(fit_text.find("\"aic\"") != std::string::npos);

  dk_family* wrong = nullptr;
  REQUIRE(dk_family_m1(2, 1.5707963267948966, 0, &wrong) == DK_OK);
  const dk_family* families[2] = {m1, wrong};
  StringGuard report;
  REQUIRE(dk_rank(families, 2, d, 30, &report.ptr) == DK_OK);
  const std::string report_text = report.ptr;
  CHECK(report_text.find("\"models\"") != std::string::npos);
  CHECK(report_text.find("\"fpm\"") != std::string::npos);
  CHECK(report_text.find("\"delta_aic\"") != std::string::npos);

  double bound = 0.0;
  CHECK(dk_fpm_loglik_bound(d, &bound) == DK_OK);
  CHECK(bound < 0.0);

  double delta = 0.0;
  dk_family* m2 = nullptr;
  REQUIRE(dk_family_m2(2, 0.0, s, &m2) == DK_OK);
  CHECK(dk_compare_m1_m2(d, m1, m2, &delta) == DK_OK);
  CHECK(std::isfinite(delta));

  dk_family_free(m2);
  dk_family_free(wrong);
  dk_family_free(m1);
  dk_dataset_free(d);
  dk_state_free(s);
}

TEST_CASE("negativity posterior through the C API") {
  dk_state* s = nullptr;
  REQUIRE(dk_state_noisy_dicke(2, 0.0, 0.2, &s) == DK_OK);
  dk_dataset* d = nullptr;
  REQUIRE(dk_dataset_simulate("collective_xy", s, 1000, 30, &d) == DK_OK);
  dk_family* m1 = nullptr;
  REQUIRE(dk_family_m1(2, 0.0, 0, &m1) == DK_OK);

  StringGuard json;
  REQUIRE(dk_negativity_posterior(m1, d, 0.01, 0, 60, &json.ptr) == DK_OK);
  const std::string text = json.ptr;
  CHECK(text.find("\"mean\"") != std::string::npos);
  CHECK(text.find("\"ci_low\"") != std::string::npos);
  CHECK(text.find("\"bins\"") != std::string::npos);

  CHECK(dk_negativity_posterior(m1, d, 0.01, 5, 60, &json.ptr) ==
        DK_ERR_INVALID_ARGUMENT);

  dk_family_free(m1);
  dk_dataset_free(d);
  dk_state_free(s);
}

TEST_CASE("experiment runner rejects malformed configuration") {
  StringGuard manifest;
  CHECK(dk_run_experiment("{\"experiment\": \"no_such_figure\"}",
                          &manifest.ptr) == DK_ERR_CONFIG);
  CHECK(dk_run_experiment("not json", &manifest.ptr) == DK_ERR_CONFIG);
}

TEST_CASE("quick verification passes through the C API") {
  StringGuard report;
  int all_passed = 0;
  REQUIRE(dk_verify("quick", &report.ptr, &all_passed) == DK_OK);
  CHECK(all_passed == 1);
  const std::string text = report.ptr;
  CHECK(text.find("\"checks\"") != std::string::npos);
  CHECK(dk_verify("bogus", &report.ptr, &all_passed) == DK_ERR_CONFIG);
}
