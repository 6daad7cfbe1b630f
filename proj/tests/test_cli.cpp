#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
  const char* p = std::getenv("COPSON_CLI");
  REQUIRE_MESSAGE(p != nullptr, "COPSON_CLI must point at the built binary");
  return p;
}

int run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: lemma certificate exits 0") {
  CHECK(run("certify lemma --id H --interval 1/3 1") == 0);
  CHECK(run("certify lemma --id T_cubic --interval 0 1/2") == 0);
  CHECK(run("certify lemma --id lemma35_gap --interval 0 1/2 --alpha 1/2") == 0);
}

TEST_CASE("cli: dominance certificate exits 0") {
  CHECK(run("certify dominance --family cubic --alpha 1/2 --n 1..1000") == 0);
}

TEST_CASE("cli: alpha out of range is a usage error (exit 3)") {
  CHECK(run("weights --family unit --alpha 2 --n 1..10") == 3);
}

TEST_CASE("cli: malformed invocations exit 3") {
  CHECK(run("definitely-not-a-command") == 3);
  CHECK(run("certify lemma --id nosuch --interval 0 1") == 3);
  CHECK(run("certify lemma --id H --interval 0 1") == 3);  // outside claimed domain
  CHECK(run("weights --family power:1/2 --alpha 0 --n 1..4") == 3);
  CHECK(run("weights --family unit --alpha 1/2 --n 10..1") == 3);
  CHECK(run("scan --family unit --alpha 0 1 --steps 4 --nmax 50") == 3);
}

TEST_CASE("cli: identities hold") {
  CHECK(run("certify identity --id M1H") == 0);
  CHECK(run("certify identity --id J2f") == 0);
  CHECK(run("certify identity --id nope") == 3);
}

TEST_CASE("cli: quadform modes") {
  CHECK(run("quadform --family unit --alpha 1/2 --N 32 --psd") == 0);
  CHECK(run("quadform --family linear --alpha 1/2 --N 2 --mineig 1/1000000") == 0);
  CHECK(run("quadform --family linear --alpha 1/2 --N 16 --random 50 --seed 9") == 0);
}

TEST_CASE("cli: oracle remainder") {
  CHECK(run("oracle remainder --trials 200 --seed 4") == 0);
}

TEST_CASE("cli: weights CSV has the documented header and rows") {
  std::string out = "cli_weights.csv";
  CHECK(run("weights --family linear --alpha 17/50 --n 1..8 -o " + out) == 0);
  std::string content = slurp(out);
  CHECK(content.rfind("n,w_lo,w_hi,classical_lo,classical_hi,margin_lo\n", 0) == 0);
  int lines = 0;
  for (char c : content)
    if (c == '\n') ++lines;
  CHECK(lines == 9);  // header + 8 rows
  CHECK(content.find(',') != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("cli: classical-only weights table") {
  std::string out = "cli_weights_classical.csv";
  CHECK(run("weights --family unit --alpha 0 --n 1..4 --classical -o " + out) == 0);
  std::string content = slurp(out);
  CHECK(content.rfind("n,classical_lo,classical_hi\n", 0) == 0);
  std::remove(out.c_str());
}

TEST_CASE("cli: reports are byte-identical across runs") {
  for (const std::string& spec :
       {std::string("certify dominance --family linear --alpha 17/50 --n 1..200"),
        std::string("scan --family unit --alpha 0 9/10 --steps 4 --nmax 50"),
        std::string("quadform --family linear --alpha 1/2 --N 16 --random 40 --seed 11"),
        std::string("weights --family cubic --alpha 1/4 --n 1..16")}) {
    CHECK(run(spec + " -o cli_det_a.out") == 0);
    CHECK(run(spec + " -o cli_det_b.out") == 0);
    std::string a = slurp("cli_det_a.out"), b = slurp("cli_det_b.out");
    CHECK(!a.empty());
    CHECK(a == b);
    std::remove("cli_det_a.out");
    std::remove("cli_det_b.out");
  }
}

TEST_CASE("cli: dominance report is identical across job counts") {
  std::string base = "certify dominance --family linear --alpha 1/2 --n 1..300";
  CHECK(run(base + " --jobs 1 -o cli_jobs_1.out") == 0);
  CHECK(run(base + " --jobs 4 -o cli_jobs_4.out") == 0);
  std::string a = slurp("cli_jobs_1.out"), b = slurp("cli_jobs_4.out");
  // jobs is echoed in the config; strip that one line before comparing.
  auto strip_jobs = [](std::string s) {
    auto pos = s.find("\"jobs\"");
    if (pos == std::string::npos) return s;
    auto end = s.find('\n', pos);
    s.erase(pos, end - pos + 1);
    return s;
  };
  CHECK(strip_jobs(a) == strip_jobs(b));
  std::remove("cli_jobs_1.out");
  std::remove("cli_jobs_4.out");
}

TEST_CASE("cli: config file mirrors flags") {
  {
    std::ofstream cfg("cli_cfg.ini");
    cfg << "[certify.dominance]\nfamily=linear\nalpha=17/50\nn=1..50\n";
  }
  CHECK(run("certify dominance --config cli_cfg.ini -o cli_cfg.out") == 0);
  std::string content = slurp("cli_cfg.out");
  CHECK(content.find("\"family\": \"linear\"") != std::string::npos);
  CHECK(content.find("\"alpha\": \"17/50\"") != std::string::npos);
  std::remove("cli_cfg.ini");
  std::remove("cli_cfg.out");
}

TEST_CASE("cli: rational config strings round-trip exactly") {
  CHECK(run("certify dominance --family linear --alpha 17/50 --n 1..20 -o cli_rt.out") == 0);
  std::string content = slurp("cli_rt.out");
  CHECK(content.find("\"alpha\": \"17/50\"") != std::string::npos);
  std::remove("cli_rt.out");
}

TEST_CASE("cli: COPSON_PRECISION_CAP overrides the default cap") {
  std::string cmd = "COPSON_PRECISION_CAP=512 " + cli_path() +
                    " certify dominance --family unit --alpha 0 --n 1..10 -o cli_env.out"
                    " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
  std::string content = slurp("cli_env.out");
  CHECK(content.find("\"precision_cap\": 512") != std::string::npos);
  std::remove("cli_env.out");

  // An explicit flag wins over the environment.
  cmd = "COPSON_PRECISION_CAP=512 " + cli_path() +
        " certify dominance --family unit --alpha 0 --n 1..10 --precision-cap 1024"
        " -o cli_env.out >/dev/null 2>&1";
  status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
  content = slurp("cli_env.out");
  CHECK(content.find("\"precision_cap\": 1024") != std::string::npos);
  std::remove("cli_env.out");
}

TEST_CASE("cli: --timing adds elapsed_ms and is off by default") {
  CHECK(run("certify dominance --family unit --alpha 0 --n 1..10 -o cli_t1.out") == 0);
  CHECK(slurp("cli_t1.out").find("elapsed_ms") == std::string::npos);
  CHECK(run("certify dominance --family unit --alpha 0 --n 1..10 --timing -o cli_t2.out") == 0);
  CHECK(slurp("cli_t2.out").find("elapsed_ms") != std::string::npos);
  std::remove("cli_t1.out");
  std::remove("cli_t2.out");
}

TEST_CASE("cli: quadform N = 0 is a usage error") {
  CHECK(run("quadform --family unit --alpha 0 --N 0 --psd") == 3);
}

TEST_CASE("cli: hitting the precision cap exits 2 with a witness") {
  // At 16 bits the margin near n = 10^4 straddles zero and the cap forbids
  // escalation, so the verdict must be Undecided, never a false Positive.
  std::string cmd = "COPSON_PRECISION_CAP=16 " + cli_path() +
                    " certify dominance --family unit --alpha 0 --n 10000..10005"
                    " --precision 16 -o cli_und.out >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 2);
  std::string content = slurp("cli_und.out");
  CHECK(content.find("\"state\": \"Undecided\"") != std::string::npos);
  CHECK(content.find("\"witness_n\": 10000") != std::string::npos);
  std::remove("cli_und.out");
}

TEST_CASE("cli: a rigorous dominance violation exits 1") {
  // q = 2^-n at alpha = 0 is outside the claimed decreasing-family range;
  // the margin at n = 2 is certifiably negative.
  {
    std::ofstream t("cli_geo.csv");
    for (int n = 1; n <= 11; ++n) t << "1/" << (1 << n) << "\n";
  }
  CHECK(run("certify dominance --family table:cli_geo.csv --alpha 0 --n 1..10") == 1);
  std::remove("cli_geo.csv");
}
