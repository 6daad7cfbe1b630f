// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Budgets and tolerances are pinned in code.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <copson/copson.hpp>

using namespace copson;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Rational R(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::vector<Rational> geometric_table(long len) {
  std::vector<Rational> t;
  for (long n = 1; n <= len; ++n) {
    Rational g(Integer(1), Integer(1) << n);
    g.canonicalize();
    t.push_back(g);
  }
  return t;
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

// ---- criterion bodies -------------------------------------------------------

Outcome polynomial_certificates() {
  auto t0 = Clock::now();
  struct Query {
    const char* id;
    Rational a, b;
  };
  std::vector<Query> queries = {
      {"H", R(1, 3), R(1)},           {"J1", R(1, 3), R(99, 100)},
      {"J2", R(1, 3), R(99, 100)},    {"f_factor", R(27, 50), R(99, 100)},
      {"quartic69", R(27, 50), R(99, 100)}, {"S_alpha", R(17, 100), R(1, 2)},
      {"U_alpha0", R(1, 100), R(1, 2)}};
  for (const auto& q : queries) {
    Verdict v = certify_lemma(q.id, q.a, q.b);
    if (v.state != Sign::Positive || v.method != Method::SturmExact)
      return {false, std::string(q.id) + " not Positive by the exact method"};
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs >= 5.0) return {false, "runtime " + fmt_seconds(secs) + " >= 5s"};
  return {true, "7 Sturm certificates in " + fmt_seconds(secs)};
}

Outcome factorization_identities() {
  Polynomial a = Polynomial::x();
  Polynomial g1({R(1, 2), R(-1, 2)}), g2({R(1, 2), R(1, 2)});
  Polynomial H({R(-10395), R(46941), R(-24898), R(8654), R(-1187), R(85)});

  Polynomial m1 = g1 * falling_product(g1, 7) - a * falling_product(a, 7);
  Polynomial rhs1 =
      Polynomial({R(1), R(-1)}) * Polynomial({R(-1), R(3)}) * Polynomial({R(13), R(-1)}) * H;
  if (!poly_identity_check(R(256) * m1, rhs1)) return {false, "2^8 M1 identity fails"};

  Polynomial j2_scaled = R(32) * (g1 * falling_product(g1, 5) + g2 * falling_product(g2, 5) -
                                  a * falling_product(a, 5));  // 6!*32 J2
  Polynomial f({R(105), R(-415), R(846), R(-706), R(201), R(-31)});
  if (!poly_identity_check(j2_scaled, Polynomial({R(9), R(-1)}) * f))
    return {false, "6!*32 J2 identity fails"};

  Rational h1_direct(0);
  for (const auto& c : H.coeffs()) h1_direct += c;  // independent of eval()
  if (h1_direct != R(19200) || H.eval(R(1)) != R(19200))
    return {false, "H(1) != 19200"};
  return {true, "both identities hold; H(1) = 19200 exactly"};
}

Outcome transcendental_certificates() {
  auto t0 = Clock::now();
  if (certify_lemma("lemma21_f", R(0), R(99, 100)).state != Sign::Positive)
    return {false, "lemma21_f not Positive"};
  if (certify_lemma("G_1750", R(17, 50), R(99, 100)).state != Sign::Positive)
    return {false, "G_1750 not Positive"};
  if (certify_lemma("T_linear", R(17, 50), R(99, 100)).state != Sign::Positive)
    return {false, "T_linear not Positive"};
  if (certify_lemma("T_cubic", R(0), R(1, 2)).state != Sign::Positive)
    return {false, "T_cubic not Positive"};
  for (const auto& alpha : {R(17, 50), R(1, 2), R(9, 10)}) {
    if (certify_lemma("lemma35_gap", R(0), R(1, 2), {}, alpha).state != Sign::Positive)
      return {false, "lemma35_gap not Positive at alpha = " + to_string(alpha)};
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs >= 60.0) return {false, "runtime " + fmt_seconds(secs) + " >= 60s"};
  return {true, "7 interval-subdivision certificates in " + fmt_seconds(secs)};
}

Outcome kpp_strictness() {
  auto t0 = Clock::now();
  WeightSequence unit(FamilySpec::unit(), 1000000);
  auto rep = certify_dominance(unit, R(0), 1, 1000000);
  if (rep.verdict.state != Sign::Positive) return {false, "dominance not Positive on 1..10^6"};

  Interval scaled = mul_q(kpp_weight(10000, 128), R(400000000));
  if (!(scaled.lower_exact() > 1 && scaled.upper_exact() < R(1) + R(1, 1000000)))
    return {false, "4 n^2 w_n at n = 10^4 outside (1, 1 + 1e-6)"};
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs >= 120.0) return {false, "runtime " + fmt_seconds(secs) + " >= 120s"};
  return {true, "Positive on 1..10^6; 4n^2 w in (1, 1+1e-6) at n = 10^4; " + fmt_seconds(secs)};
}

Outcome power_weight_dominance() {
  auto t0 = Clock::now();
  WeightSequence unit(FamilySpec::unit(), 100000);
  std::vector<Rational> alphas;
  for (long k = 0; k <= 9; ++k) alphas.push_back(R(k, 10));
  alphas.push_back(R(99, 100));
  for (const auto& alpha : alphas) {
    auto rep = certify_dominance(unit, alpha, 1, 100000);
    if (rep.verdict.state != Sign::Positive)
      return {false, "not Positive at alpha = " + to_string(alpha)};
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs >= 600.0) return {false, "runtime " + fmt_seconds(secs) + " >= 600s"};
  return {true, "11 alphas x 10^5 indices in " + fmt_seconds(secs)};
}

Outcome decreasing_q_dominance() {
  WeightSequence harmonic(FamilySpec::power(R(-1)), 1000);
  WeightSequence geometric(FamilySpec::custom(geometric_table(1001)), 1000);
  for (const auto& alpha : {R(1, 3), R(1, 2), R(3, 4)}) {
    if (certify_dominance(harmonic, alpha, 1, 1000).verdict.state != Sign::Positive)
      return {false, "q=1/n not Positive at alpha = " + to_string(alpha)};
    if (certify_dominance(geometric, alpha, 1, 1000).verdict.state != Sign::Positive)
      return {false, "q=2^-n not Positive at alpha = " + to_string(alpha)};
    for (long n : {1L, 2L, 10L}) {
      for (long k = 3; k <= 40; ++k) {
        if (sgn(series_ck(harmonic, alpha, n, k)) <= 0)
          return {false, "C_k <= 0 for q=1/n at (n,k,alpha)"};
        if (sgn(series_ck(geometric, alpha, n, k)) <= 0)
          return {false, "C_k <= 0 for q=2^-n at (n,k,alpha)"};
      }
    }
  }
  return {true, "dominance and C_k > 0 (k = 3..40) for both decreasing families"};
}

Outcome linear_family_dominance() {
  WeightSequence linear(FamilySpec::linear(), 100000);
  for (const auto& alpha : {R(17, 50), R(1, 2), R(3, 4), R(99, 100)}) {
    if (certify_dominance(linear, alpha, 1, 100000).verdict.state != Sign::Positive)
      return {false, "not Positive at alpha = " + to_string(alpha)};
  }
  return {true, "4 alphas x 10^5 indices Positive"};
}

Outcome cubic_family_dominance() {
  WeightSequence cubic(FamilySpec::cubic(), 100000);
  for (const auto& alpha : {R(0), R(1, 4), R(1, 2)}) {
    if (certify_dominance(cubic, alpha, 1, 100000).verdict.state != Sign::Positive)
      return {false, "not Positive at alpha = " + to_string(alpha)};
  }
  return {true, "3 alphas x 10^5 indices Positive"};
}

Outcome remainder_identity() {
  SplitMix64 rng(20250808);
  for (long trial = 0; trial < 1000; ++trial) {
    long N = rng.next_in(1, 32);
    std::vector<Rational> lambda, mu{Rational(0)};
    for (long i = 0; i <= N; ++i) lambda.push_back(rng.positive_rational());
    for (long i = 1; i <= N + 1; ++i) mu.push_back(rng.positive_rational());
    FinSuppVector A;
    for (long i = 1; i <= N; ++i) A.entries.push_back(rng.rational(-8, 8));
    auto r = remainder_decomposition(lambda, mu, A);
    if (r.defect != 0) return {false, "nonzero defect at trial " + std::to_string(trial)};
  }
  // A = mu truncated at N: remainder = mu_N mu_{N+1} / lambda_{N+1} exactly.
  SplitMix64 rng2(7);
  for (long N : {1L, 3L, 8L, 32L}) {
    std::vector<Rational> lambda, mu{Rational(0)};
    for (long i = 0; i <= N; ++i) lambda.push_back(rng2.positive_rational());
    for (long i = 1; i <= N + 1; ++i) mu.push_back(rng2.positive_rational());
    FinSuppVector A;
    for (long i = 1; i <= N; ++i) A.entries.push_back(mu[static_cast<std::size_t>(i)]);
    auto r = remainder_decomposition(lambda, mu, A);
    Rational expected = mu[static_cast<std::size_t>(N)] * mu[static_cast<std::size_t>(N + 1)] /
                        lambda[static_cast<std::size_t>(N)];
    if (r.defect != 0 || r.remainder != expected)
      return {false, "mu-truncated boundary term mismatch at N = " + std::to_string(N)};
  }
  return {true, "1000 random tuples: exact zero defect; boundary term reproduced"};
}

Outcome quadform_psd() {
  struct FamilyAlpha {
    FamilySpec spec;
    Rational alpha;
  };
  std::vector<FamilyAlpha> pairs;
  for (long k = 0; k <= 9; ++k) pairs.push_back({FamilySpec::unit(), R(k, 10)});
  pairs.push_back({FamilySpec::unit(), R(99, 100)});
  for (const auto& a : {R(1, 3), R(1, 2), R(3, 4)}) {
    pairs.push_back({FamilySpec::power(R(-1)), a});
    pairs.push_back({FamilySpec::custom(geometric_table(4098)), a});
  }
  for (const auto& a : {R(17, 50), R(1, 2), R(3, 4), R(99, 100)})
    pairs.push_back({FamilySpec::linear(), a});
  for (const auto& a : {R(0), R(1, 4), R(1, 2)}) pairs.push_back({FamilySpec::cubic(), a});

  for (const auto& [spec, alpha] : pairs) {
    auto seq = std::make_shared<const WeightSequence>(spec, 4097);
    Rational a = alpha;
    PsdBuilder builder{
        [seq, a](long n, mpfr_prec_t prec) {
          return mul_q(pow_enclosure(seq->Q(n), Rational(-a), prec), seq->q(n));
        },
        [seq, a](long n, mpfr_prec_t prec) { return copson_weight(*seq, a, n, prec); }};
    for (long N : {16L, 256L, 4096L}) {
      auto out = psd_verdict(builder, N, Rational(0), 128, 4096);
      if (out.verdict.state != Sign::Positive || !out.eigs_below || *out.eigs_below != 0)
        return {false, seq->family_id() + " alpha=" + to_string(a) + " N=" + std::to_string(N) +
                           ": eig count below 0 not zero"};
    }
  }

  // N = 2 bracket vs the closed-form smallest eigenvalue, tolerance 1e-6.
  auto unit = std::make_shared<const WeightSequence>(FamilySpec::unit(), 4);
  auto lam = [unit](long n) { return Interval::from_exact(unit->q(n), 256); };
  auto wgt = [unit](long n) { return copson_weight(*unit, Rational(0), n, 256); };
  TridiagonalForm f2 = build_form(lam, wgt, 2);
  auto bracket = min_eig_bracket(f2, R(1, 2000000), 256);
  if (!bracket) return {false, "N=2 bracket undecided"};
  Interval tr = f2.diag[0] + f2.diag[1];
  Interval det = f2.diag[0] * f2.diag[1] - square(f2.off[0]);
  Interval closed = (tr - sqrt(square(tr) - mul_q(det, R(4)))) / R(2);
  Rational dist_hi = bracket->upper_exact() - closed.lower_exact();
  Rational dist_lo = closed.upper_exact() - bracket->lower_exact();
  if (!(dist_hi <= R(1, 1000000) + closed.width_exact() &&
        dist_lo <= R(1, 1000000) + closed.width_exact() && bracket->intersects(closed)))
    return {false, "N=2 bracket differs from the closed form by more than 1e-6"};
  return {true, "24 family/alpha pairs PSD at N in {16,256,4096}; N=2 bracket matches closed form"};
}

Outcome cross_route_equality() {
  auto unit = std::make_shared<const WeightSequence>(FamilySpec::unit(), 64);
  for (const auto& alpha : {R(0), R(17, 50), R(1, 2), R(9, 10)}) {
    LambdaMuPair pair = copson_lambda_mu(unit, alpha, 128);
    for (long n : {1L, 2L, 3L, 10L, 63L}) {
      Interval c = copson_weight(*unit, alpha, n, 128);
      Interval p = power_weight(alpha, n, 128);
      Interval m = master_weight(pair, n);
      if (!(c.intersects(p) && p.intersects(m) && c.intersects(m)))
        return {false, "routes disagree at alpha = " + to_string(alpha) +
                           ", n = " + std::to_string(n)};
    }
  }
  WeightSequence cubic(FamilySpec::cubic(), 4);
  auto w = copson_weight_rational(cubic, R(0), 1);
  auto cl = classical_weight_rational(cubic, R(0), 1);
  if (!w || *w != R(3, 4)) return {false, "cubic alpha=0 n=1 improved weight != 3/4"};
  if (!cl || *cl != R(1, 4)) return {false, "cubic alpha=0 n=1 classical weight != 1/4"};
  return {true, "three routes intersect; exact subcase 3/4 vs 1/4 holds"};
}

Outcome scaling_invariance() {
  WeightSequence linear(FamilySpec::linear(), 1000);
  Rational c = R(7, 3);
  WeightSequence scaled = linear.scaled(c);
  const Rational alpha = R(1, 2);
  auto a = certify_dominance(linear, alpha, 1, 1000);
  auto b = certify_dominance(scaled, alpha, 1, 1000);
  if (a.verdict.state != Sign::Positive || b.verdict.state != Sign::Positive)
    return {false, "verdicts differ under scaling"};
  if (a.min_margin_n != b.min_margin_n) return {false, "argmin index changed under scaling"};
  Interval factor = pow_enclosure(c, Rational(alpha - 1), 128);
  for (long n : {1L, 7L, 100L, 1000L}) {
    Interval lhs = copson_weight(scaled, alpha, n, 128);
    Interval rhs = factor * copson_weight(linear, alpha, n, 128);
    if (!lhs.intersects(rhs)) return {false, "weights do not match under c^{alpha-1}"};
  }
  return {true, "verdict and argmin preserved; weights match under c^(alpha-1)"};
}

Outcome determinism() {
  const char* cli = std::getenv("COPSON_CLI");
  if (!cli) return {false, "COPSON_CLI not set"};
  auto run_to = [&](const std::string& args, const std::string& path) {
    std::string cmd = std::string(cli) + " " + args + " -o " + path + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return status != -1 && WEXITSTATUS(status) == 0;
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::vector<std::string> commands = {
      "certify dominance --family linear --alpha 17/50 --n 1..500",
      "certify lemma --id T_linear --interval 17/50 99/100",
      "scan --family unit --alpha 0 9/10 --steps 5 --nmax 100",
      "quadform --family cubic --alpha 1/4 --N 64 --psd",
      "quadform --family linear --alpha 1/2 --N 32 --random 100 --seed 20250808",
      "weights --family power:-1 --alpha 1/3 --n 1..32",
      "oracle remainder --trials 100 --seed 5"};
  for (const auto& cmd : commands) {
    if (!run_to(cmd, "acc_det_a.out") || !run_to(cmd, "acc_det_b.out"))
      return {false, "command failed: " + cmd};
    std::string a = slurp("acc_det_a.out"), b = slurp("acc_det_b.out");
    std::remove("acc_det_a.out");
    std::remove("acc_det_b.out");
    if (a.empty() || a != b) return {false, "bytes differ for: " + cmd};
  }
  return {true, std::to_string(commands.size()) + " commands byte-identical across runs"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> body;
  };
  std::vector<Criterion> criteria = {
      {1, "polynomial certificates (Sturm, < 5s)", polynomial_certificates},
      {2, "factorization identities and H(1) = 19200", factorization_identities},
      {3, "transcendental lemma certificates (< 60s)", transcendental_certificates},
      {4, "kpp strictness on 1..10^6 and 4n^2 w at 10^4 (< 120s)", kpp_strictness},
      {5, "power-weight dominance, 11 alphas on 1..10^5 (< 10min)", power_weight_dominance},
      {6, "decreasing-q dominance and C_k positivity", decreasing_q_dominance},
      {7, "linear-family dominance on 1..10^5", linear_family_dominance},
      {8, "cubic-family dominance on 1..10^5", cubic_family_dominance},
      {9, "remainder identity: 1000 exact tuples", remainder_identity},
      {10, "quadform PSD at N in {16,256,4096}; 2x2 bracket", quadform_psd},
      {11, "cross-route weight equality", cross_route_equality},
      {12, "scaling invariance at c = 7/3", scaling_invariance},
      {13, "byte-identical reports", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("criterion %2d: %s — %s (%s; %s)\n", c.id, out.pass ? "PASS" : "FAIL", c.title,
                out.detail.c_str(), fmt_seconds(secs).c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all 13 criteria passed\n");
  return failures == 0 ? 0 : 1;
}
