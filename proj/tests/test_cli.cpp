#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// stdout only unless merge is set
Run run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(LPM_CLI_PATH) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: split report") {
  const Run csv = run("split --model saddle1");
  CHECK(csv.out == "re,im,block\n1,0,plus\n-1,0,minus\n");
  const Run r = run("split --model saddle1", true);
  CHECK(r.code == 0);
  CHECK(r.out.find("dims (plus, center, minus) = (1, 0, 1)") != std::string::npos);
  CHECK(r.out.find("re,im,block\n1,0,plus\n-1,0,minus\n") != std::string::npos);
  const Run rd = run("split --model rd --lambda-param 2", true);
  CHECK(rd.code == 0);
  CHECK(rd.out.find("(2, ") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  CHECK(run("split --model nope").code == 1);
  CHECK(run("manifold --model saddle1 --eps -1").code == 1);
  CHECK(run("waterwave froude --h0 inf").code == 1);
  CHECK(run("frobnicate").code == 1);
  // ambiguous eigenvalue at the gap boundary
  CHECK(run("split --model rd --lambda-param 0.1 --gap 0.1").code == 2);
  // contraction budget fails without --force
  CHECK(run("manifold --model mmt --alpha 0.5 --beta 0.5 --sigma -1 --a 0.5 --xi0 2 --radius 3 --grid 3 --eps 0.02")
            .code == 2);
}

TEST_CASE("cli: water-wave numbers") {
  const Run f = run("waterwave froude --g 1 --h0 1 --c 0.5 --sigma 1");
  CHECK(f.code == 0);
  CHECK(f.out == "froude,bond,coercive\n0.5,1,true\n");
  const Run k = run("waterwave kh --rho- 2 --rho+ 1 --g 1 --sigma 1 --b 2");
  CHECK(k.code == 0);
  CHECK(k.out.rfind("bound,tau_min,closed_form\n0,", 0) == 0);
  const Run s = run("waterwave symbol --k 0,3 --h0 inf");
  CHECK(s.code == 0);
  CHECK(s.out == "k,h0,symbol\n0,inf,0\n3,inf,3\n");
}

TEST_CASE("cli: manifold csv matches the exact parabola") {
  const Run r = run("manifold --model saddle1 --grid 5 --eps 0.1");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "base_1,h_1,lambda_fit,iterations,fp_residual,invariance_residual,status");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.find(',') == std::string::npos) continue;
    const double x = std::stod(line.substr(0, line.find(',')));
    const std::string rest = line.substr(line.find(',') + 1);
    const double h = std::stod(rest.substr(0, rest.find(',')));
    CHECK(std::abs(h - x * x / 3.0) < 1e-6);
    ++rows;
  }
  CHECK(rows == 5);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("cli: output is independent of --jobs") {
  const Run a = run("manifold --model rd --lambda-param 2 --modes 5 --grid 5 --eps 0.1 --jobs 1");
  const Run b = run("manifold --model rd --lambda-param 2 --modes 5 --grid 5 --eps 0.1 --jobs 4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run("picard --model saddle1 --seed 5 --T 0.3");
  const Run d = run("picard --model saddle1 --seed 5 --T 0.3");
  CHECK(c.code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("cli: config file with flag override") {
  const std::string cfg = "lpm_cli_test.cfg";
  {
    std::ofstream f(cfg);
    f << "# froude settings\ng = 1\nh0 = 1\nc = 0.5\nsigma = 1\n";
  }
  const Run base = run("waterwave froude --config " + cfg);
  CHECK(base.code == 0);
  CHECK(base.out == "froude,bond,coercive\n0.5,1,true\n");
  const Run over = run("waterwave froude --config " + cfg + " --c 1");
  CHECK(over.out == "froude,bond,coercive\n1,1,false\n");
  std::remove(cfg.c_str());
}

TEST_CASE("cli: --out writes the csv file") {
  const std::string path = "lpm_cli_test.csv";
  const Run r = run("mmt-scan --a-list 0 --xi-min -1 --xi-max 3 --out " + path);
  CHECK(r.code == 0);
  const std::string csv = slurp(path);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,xi,c_plus,c_minus,c,discriminant,flagged,max_real_part");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 8);
    CHECK(cells[6] == "0");
    ++rows;
  }
  CHECK(rows == 4);  // the carrier xi0 = 2 is skipped
  std::remove(path.c_str());
}
