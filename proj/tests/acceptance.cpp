// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracle.hpp"
#include "palab/coding.hpp"
#include "palab/distill.hpp"
#include "palab/experiment.hpp"
#include "palab/infotheory.hpp"
#include "palab/privstate.hpp"
#include "palab/samplers.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>
#include <string>

using namespace palab;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;
double worst_privacy_slack = -1.0;  // max over distill runs of D - 2 sqrt(1 - P_s)

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note_distill(double ps, double trace_distance) {
  worst_privacy_slack = std::max(worst_privacy_slack, trace_distance - 2 * std::sqrt(std::max(0.0, 1 - ps)));
}

void ac1() {
  const auto t0 = Clock::now();
  Rng rng = trial_rng(2024, 0);
  std::size_t agree = 0, total = 0, priv = 0;
  for (std::size_t i = 0; i < 600; ++i) {
    const std::size_t ds = 1 + rng() % 4, de = 1 + rng() % 4;
    MultipartiteState g = [&] {
      switch (i % 3) {
        case 0: return private_state(random_twisting(ds, de, rng));
        case 1: return perturb(private_state(random_twisting(ds, de, rng)), 0.1, rng);
        default: return sample_checker_state(CheckerFamily::haar, ds, de, rng);
      }
    }();
    const auto d1 = check_thm1(g, 1e-8);
    const auto d2 = check_thm2(g, 1e-8);
    agree += *d1.eve_marginal_verdict == *d2.orthogonality_verdict;
    priv += *d1.eve_marginal_verdict;
    ++total;
  }
  const double secs = seconds_since(t0);
  report("AC1", agree == total && secs <= 120,
         fmt("characterizations agree on %zu/%zu states (%zu private), %.1f s", agree, total, priv, secs));
}

void ac2() {
  Rng rng = trial_rng(2024, 1);
  double worst = 1.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = private_state(random_twisting(1 + i % 4, 1 + (i / 4) % 4, rng));
    const auto back = private_state(extract_twisting(g));
    worst = std::min(worst, std::abs(back.amplitudes().dot(g.amplitudes())));
  }
  report("AC2", worst >= 1 - 1e-9, fmt("min round-trip fidelity %.15f over 100 instances", worst));
}

void ac3() {
  Rng rng = trial_rng(2024, 2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto r = key_rates(purify_with_shield(random_two_state_attack(2, rng)));
    worst = std::max(worst, std::abs(r.pa - r.psd));
  }
  // eigenvalues of (|0><0| + |+><+|)/2 from the 2x2 closed form
  const Matrix avg = 0.5 * (oracle::proj(basis_vector(2, 0)) + oracle::proj(x_basis_state(2, 0)));
  const auto [l1, l2] = oracle::eig2(avg);
  const double expected = 1.0 + l1 * std::log2(l1) + l2 * std::log2(l2);
  const auto pi4 = key_rates(purify_with_shield(theta_attack(std::numbers::pi / 4)));
  const double dev = std::max(std::abs(pi4.pa - expected), std::abs(pi4.psd - expected));
  report("AC3", worst <= 1e-9 && dev <= 1e-9,
         fmt("max |pa - psd| %.2e over 100 attacks; pi/4 rates %.12f, %.12f vs %.12f", worst, pi4.pa,
             pi4.psd, expected));
}

void ac4() {
  const auto psi = purify_with_shield(theta_attack(std::numbers::pi / 4));
  double form_dev = 0.0, fid_dev = 0.0;
  int runs = 0;
  for (unsigned n = 1; n <= 3; ++n) {
    const auto big = n_copies(psi, n);
    for (std::size_t m = 0; m <= n; ++m)
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng = trial_rng(400 + n * 10 + m, seed);
        const auto a = announce_hash(big, random_full_rank_hash(m, n, rng), rng);
        const auto fam = conditional_family(a.state);
        const auto povm = pgm(fam, Typicality::off());
        const Matrix ubar = untwisting(ybar_operators(a.state, Typicality::off()));
        const auto untwisted = untwisted_pgm(ubar, fam.states.size());
        const Matrix supp = support_projector(fam.average());
        for (std::size_t y = 0; y < untwisted.size(); ++y)
          form_dev = std::max(form_dev, operator_norm(supp * untwisted[y] * supp - povm.elements[y]));
        const auto sr = success_probability(a.state, ubar);
        fid_dev = std::max(fid_dev, std::abs(sr.double_sum - sr.fidelity_sq));
        note_distill(sr.double_sum, sr.trace_distance);
        ++runs;
      }
  }
  report("AC4", form_dev <= 1e-9 && fid_dev <= 1e-9,
         fmt("%d runs, n <= 3: max operator-norm gap %.2e, max |P_s - F^2| %.2e", runs, form_dev, fid_dev));
}

void ac6() {
  double worst = 0.0;
  int passed = 0, total = 0;
  for (std::size_t n : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng = trial_rng(600 + n, seed);
      const auto psi = purify_with_shield(random_two_state_attack(2, rng));
      const std::size_t m = 1 + seed % (n - 1);
      const auto r = equivalence_check(psi, n, random_full_rank_hash(m, n, rng));
      worst = std::max(worst, r.max_deviation);
      passed += r.passed;
      ++total;
    }
  }
  report("AC6", worst <= 1e-9 && passed == total,
         fmt("%d/%d checks, max deviation %.2e", passed, total, worst));
}

void ac7() {
  Rng rng = trial_rng(2024, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 1e300;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = std::size_t{2} << (i % 4);
    Eigen::HouseholderQR<Matrix> qr(oracle::ginibre(d, d, rng));
    const Matrix u = qr.householderQ();
    RealVector ev(static_cast<Eigen::Index>(d));
    for (auto& v : ev) v = unit(rng);
    const Matrix s = u * ev.cast<cplx>().asDiagonal() * u.adjoint();
    const Matrix g = oracle::ginibre(d, 1 + rng() % d, rng);
    worst = std::min(worst, hn_lemma_check(s, unit(rng) * g * g.adjoint()));
  }
  report("AC7", worst >= -1e-9, fmt("min eigenvalue of RHS - LHS %.3e over 500 pairs, dims 2..16", worst));
}

void ac8() {
  const auto t0 = Clock::now();
  const Ensemble ens{{0.5, 0.5}, {oracle::proj(basis_vector(2, 0)), oracle::proj(x_basis_state(2, 0))}};
  const double h = shannon_entropy(ens.probabilities), chi = holevo_chi(ens);
  bool below = true, nonincreasing = true;
  double previous = 2.0;
  std::string means;
  for (unsigned n = 2; n <= 6; ++n) {
    const std::size_t size = choose_output_size(h, chi, 0.1, n);
    const CodingInstance inst{ens, n, size, 0.1, 0.1};
    const double bound = coding_error_bound(inst);
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng = trial_rng(800 + n, seed);
      const double e = coding_error_exact(inst, random_linear_hash(std::countr_zero(size), n, rng));
      below = below && e <= bound + 1e-12;
      sum += e;
    }
    const double mean = sum / 20;
    nonincreasing = nonincreasing && mean <= previous + 1e-12;
    previous = mean;
    means += fmt("%s%u:%.6f", means.empty() ? "" : " ", n, mean);
  }
  const double secs = seconds_since(t0);
  report("AC8", below && nonincreasing && secs <= 300,
         fmt("exact <= bound on all instances: %s; mean P_E by n {%s} nonincreasing: %s; %.1f s",
             below ? "yes" : "no", means.c_str(), nonincreasing ? "yes" : "no", secs));
}

void ac9() {
  bool exact = true;
  std::size_t pairs = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      const std::uint64_t family = std::uint64_t{1} << (m * n);
      const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
      for (std::uint64_t x = 0; x <= mask; ++x)
        for (std::uint64_t xp = x + 1; xp <= mask; ++xp) {
          std::uint64_t hits = 0;
          for (std::uint64_t code = 0; code < family; ++code) {
            BinaryMatrix f(m, n);
            for (std::size_t i = 0; i < m; ++i) f.set_row(i, (code >> (i * n)) & mask);
            hits += f.apply(x) == f.apply(xp);
          }
          exact = exact && (hits << m) == family;  // hits / family == 2^{-m}
          ++pairs;
        }
    }
  report("AC9", exact, fmt("collision probability 2^-m exactly on %zu (m, n, x, x') cases", pairs));
}

void ac10() {
  Rng rng = trial_rng(2024, 10);
  double priv_dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto u = uncertainty_check(private_state(random_twisting(1 + i % 4, 1 + (i / 4) % 4, rng)));
    priv_dev = std::max({priv_dev, std::abs(u.h_z_given_e - 1.0), std::abs(u.h_x_given_bs)});
  }
  double min_sum = 2.0;
  for (int i = 0; i < 1000; ++i) {
    const auto u = uncertainty_check(sample_checker_state(CheckerFamily::haar, 1 + i % 4, 1 + (i / 4) % 4, rng));
    min_sum = std::min(min_sum, u.h_z_given_e + u.h_x_given_bs);
  }
  report("AC10", priv_dev <= 1e-9 && min_sum >= 1 - 1e-9,
         fmt("private states off (1, 0) by %.2e; min H(Z|E) + H(X|BS) %.6f over 1000 states", priv_dev, min_sum));
}

void ac11_and_5() {
  ExperimentConfig c;
  c.experiment = Experiment::distill_sweep;
  c.n = 5;
  c.trials = 20;
  c.margin = 0.15;
  c.format = Format::json;
  const auto r = run(c);
  const auto j = nlohmann::json::parse(r.text);
  for (const auto& row : j["rows"]) note_distill(row[5].get<double>(), row[8].get<double>());
  std::string means;
  for (const auto& [n, v] : j["summary"]["mean_P_s"].items())
    means += fmt("%s%s:%.6f", means.empty() ? "" : " ", n.c_str(), v.get<double>());
  std::string ms;
  unsigned last_n = 0;
  for (const auto& row : j["rows"]) {
    if (row[0].get<unsigned>() == last_n) continue;
    last_n = row[0].get<unsigned>();
    ms += fmt("%s%u:%u", ms.empty() ? "" : " ", last_n, row[1].get<unsigned>());
  }

  Rng rng = trial_rng(2024, 5);
  double pair_slack = -1.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + i % 3;
    const Matrix a = oracle::random_state(d, rng), b = oracle::random_state(d, rng);
    pair_slack = std::max(pair_slack, trace_distance(a, b) - fvg_bound(fidelity(a, b)));
  }
  report("AC5", worst_privacy_slack <= 1e-9 && pair_slack <= 1e-9,
         fmt("max D - 2 sqrt(1 - P_s) %.3e over distill runs; max ||rho - sigma||_1 - 2 sqrt(1 - F^2) %.3e over 500 pairs",
             worst_privacy_slack, pair_slack));
  report("AC11", j["summary"]["nondecreasing_in_n"].get<bool>(),
         fmt("mean P_s by n {%s} with m by n {%s}, 20 hashes each", means.c_str(), ms.c_str()));
}

}  // namespace

int main() {
  try {
    ac1();
    ac2();
    ac3();
    ac4();
    ac6();
    ac7();
    ac8();
    ac9();
    ac10();
    ac11_and_5();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
