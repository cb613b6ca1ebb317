#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

using json = nlohmann::json;
using namespace qcirc;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string command = env + " " + std::string(QC_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.out.append(buffer, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

json run_json(const std::string& args, int expect_exit = 0) {
  const CliResult result = run_cli(args);
  INFO("command: " << args << "\noutput: " << result.out);
  REQUIRE(result.exit_code == expect_exit);
  return json::parse(result.out);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("pdf subcommand equals the library bit for bit", "[cli]") {
  const json uniform = run_json("pdf --mu1 0 --mu2 0 --r1 0 --r2 0 --theta 1.0");
  CHECK(uniform.at("pdf").get<double>() == pdf(QCParams(0, 0, 0, 0), Angle(1.0)));

  const json generic = run_json("pdf --mu1 0.3 --mu2 2.7 --r1 1.25 --r2 0.5 --theta 5.1");
  CHECK(generic.at("pdf").get<double>() == pdf(QCParams(0.3, 2.7, 1.25, 0.5), Angle(5.1)));

  const json degrees = run_json("pdf --mu1 0 --mu2 0 --r1 1 --r2 1 --theta 180 --degrees");
  CHECK(degrees.at("pdf").get<double>() == pdf(QCParams(0, 0, 1, 1), Angle::from_degrees(180)));
}

TEST_CASE("cdf and summary subcommands", "[cli]") {
  const json c = run_json("cdf --mu1 0 --mu2 0 --r1 1 --r2 1 --theta 3.141592653589793");
  CHECK(c.at("cdf").get<double>() ==
        cdf(QCParams(0, 0, 1, 1), Angle(3.141592653589793), Angle(0.0)));

  const json s = run_json("summary --mu1 0 --mu2 1.5707963267948966 --r1 1 --r2 1");
  CHECK(s.at("mean_direction").get<double>() == Catch::Approx(kPi / 4).margin(1e-12));
  CHECK(s.at("resultant_length").get<double>() ==
        Catch::Approx(std::sqrt(2.0) / 3.0).margin(1e-12));

  const CliResult undefined = run_cli("summary --r1 0 --r2 0");
  CHECK(undefined.exit_code == 2);
  CHECK(json::parse(undefined.out).at("error").at("code") == "UndefinedDirection");
}

TEST_CASE("modes subcommand matches the worked example", "[cli]") {
  const json m = run_json("modes --mu1 0 --mu2 0 --r1 1 --r2 1");
  CHECK_FALSE(m.at("unimodal").get<bool>());
  REQUIRE(m.at("modes").size() == 2);
  REQUIRE(m.at("antimodes").size() == 2);
  CHECK(m.at("modes")[0].at("theta").get<double>() == Catch::Approx(0.0).margin(1e-9));
  CHECK(m.at("modes")[1].at("theta").get<double>() == Catch::Approx(kPi).margin(1e-9));
  CHECK(m.at("antimodes")[0].at("theta").get<double>() ==
        Catch::Approx(2.0943951023931953).margin(1e-9));
  CHECK(m.at("antimodes")[1].at("theta").get<double>() ==
        Catch::Approx(4.1887902047863905).margin(1e-9));
  // Bit-for-bit against the library.
  const StationaryReport report = classify_stationary(QCParams(0, 0, 1, 1));
  CHECK(m.at("modes")[0].at("density").get<double>() == report.modes[0].density);
}

TEST_CASE("median rules", "[cli]") {
  const json dev = run_json("median --mu1 0 --mu2 1.5707963267948966 --r1 1 --r2 1");
  CHECK(dev.at("median").get<double>() == Catch::Approx(kPi / 4).margin(1e-12));
  const json cos = run_json("median --mu1 0 --mu2 1.5707963267948966 --r1 1 --r2 1 --rule cosine");
  CHECK(cos.at("median").get<double>() == Catch::Approx(5.0 * kPi / 4).margin(1e-12));
}

TEST_CASE("symmetry subcommand", "[cli]") {
  const json sym = run_json("symmetry --mu1 1 --mu2 2 --r1 0.7 --r2 0.7");
  CHECK(sym.at("symmetric").get<bool>());
  CHECK(sym.at("case") == "EqualRadii");
  CHECK(sym.at("axis").get<double>() == Catch::Approx(1.5).margin(1e-12));
  const json none = run_json("symmetry --mu1 0.3 --mu2 1.7 --r1 0.5 --r2 1.0");
  CHECK_FALSE(none.at("symmetric").get<bool>());
}

TEST_CASE("member subcommand reports the strict-inclusion witness", "[cli]") {
  const json member = run_json("member --c1 0+0i --c2 0.5+0i");
  CHECK(member.at("in_T2pi").get<bool>());
  CHECK_FALSE(member.at("qc_representable").get<bool>());
  CHECK(member.at("min_density").get<double>() == Catch::Approx(0.0).margin(1e-12));

  const json inside = run_json("member --c1 0.6666666666666666+0i --c2 0.3333333333333333+0i");
  CHECK(inside.at("in_T2pi").get<bool>());
  CHECK(inside.at("qc_representable").get<bool>());
  CHECK(inside.at("qc_params").at("r1").get<double>() == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("factor subcommand exposes both candidates", "[cli]") {
  const json f = run_json("factor --c1 -0.5645161290322581+0i --c2 0.0967741935483871+0i");
  CHECK(f.at("candidates").size() == 2);
  CHECK(f.at("params").at("r1").get<double>() == Catch::Approx(1.2).margin(1e-7));
  const CliResult bad = run_cli("factor --c1 0+0i --c2 0.5+0i");
  CHECK(bad.exit_code == 2);
  CHECK(json::parse(bad.out).at("error").at("code") == "NotRepresentableAsQC");
  const CliResult out = run_cli("factor --c1 0.9+0i --c2 0.9+0i");
  CHECK(out.exit_code == 2);
  CHECK(json::parse(out.out).at("error").at("code") == "NotAMeasure");
}

TEST_CASE("convolve and mix subcommands", "[cli]") {
  const json conv = run_json(
      "convolve --a-c1 0.6666666666666666+0i --a-c2 0.3333333333333333+0i --b-c1 0+0i --b-c2 "
      "0.5+0i");
  CHECK(conv.at("c1").at("re").get<double>() == 0.0);
  CHECK(conv.at("c2").at("re").get<double>() == Catch::Approx(1.0 / 6.0).margin(1e-15));

  const json mixed = run_json(
      "mix --a-c1 0.6666666666666666+0i --a-c2 0.3333333333333333+0i --b-c1 0+0i --b-c2 0+0i "
      "--weight 0.5");
  CHECK(mixed.at("c1").at("re").get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-15));

  const CliResult bad_weight = run_cli(
      "mix --a-c1 0+0i --a-c2 0+0i --b-c1 0+0i --b-c2 0+0i --weight 1.5");
  CHECK(bad_weight.exit_code == 2);
  CHECK(json::parse(bad_weight.out).at("error").at("code") == "InvalidWeight");
}

TEST_CASE("sample subcommand determinism and seed precedence", "[cli]") {
  const json a = run_json("sample --mu1 0 --mu2 0 --r1 1 --r2 1 --n 50 --seed 11");
  const json b = run_json("sample --mu1 0 --mu2 0 --r1 1 --r2 1 --n 50 --seed 11");
  CHECK(a == b);
  CHECK(a.at("angles").size() == 50);
  // Bit-for-bit against the library.
  const SampleBatch batch = sample(QCParams(0, 0, 1, 1), 50, 11);
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(a.at("angles")[k].get<double>() == batch.angles[k].radians());
  }

  // QC_SEED overrides --seed.
  const CliResult env = run_cli("sample --r1 1 --r2 1 --n 5 --seed 5", "QC_SEED=123");
  const json env_json = json::parse(env.out);
  CHECK(env_json.at("seed").get<std::uint64_t>() == 123);
  const json direct = run_json("sample --r1 1 --r2 1 --n 5 --seed 123");
  CHECK(env_json == direct);

  const CliResult zero = run_cli("sample --n 0");
  CHECK(zero.exit_code == 2);
  CHECK(json::parse(zero.out).at("error").at("code") == "InvalidCount");
}

TEST_CASE("usage errors exit with code 1", "[cli]") {
  CHECK(run_cli("pdf --theta 1 --bogus-flag 3").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("member --c1 not-a-number --c2 0+0i").exit_code == 1);
  CHECK(run_cli("median --r1 1 --rule nonsense").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("csv output format", "[cli]") {
  const CliResult csv = run_cli("pdf --mu1 0 --mu2 0 --r1 0 --r2 0 --theta 1 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.rfind("theta,density\n", 0) == 0);
  CHECK(csv.out.find("0.15915494309189535") != std::string::npos);
  CHECK(csv.out.find('\r') == std::string::npos);

  const CliResult sample_csv = run_cli("sample --r1 0.5 --r2 0.5 --n 3 --seed 2 --format csv");
  CHECK(sample_csv.out.rfind("theta\n", 0) == 0);

  // Generic key,value flattening for report-style outputs.
  const CliResult member_csv = run_cli("member --c1 0+0i --c2 0+0i --format csv");
  CHECK(member_csv.out.rfind("key,value\n", 0) == 0);
  CHECK(member_csv.out.find("in_T2pi,true") != std::string::npos);
}

TEST_CASE("fit subcommand reads angle files", "[cli]") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string path = dir + "/qc_cli_fit_input.txt";
  {
    const SampleBatch batch = sample(QCParams(1.0, 2.5, 0.6, 0.3), 5000, 77);
    std::ofstream out(path);
    out << "# angles in radians\n";
    for (const Angle& a : batch.angles) out << a.radians() << "\n";
  }
  const json f = run_json("fit --input " + path);
  CHECK(f.at("params").at("r1").get<double>() > 0.0);
  CHECK(f.at("shrink_factor").get<double>() <= 1.0);
  CHECK(f.contains("projected"));
  CHECK(f.contains("perturbed"));
  std::remove(path.c_str());
}

TEST_CASE("plot-grid default layout", "[cli]") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string svg = dir + "/qc_cli_grid.svg";
  const std::string csv = dir + "/qc_cli_grid.csv";
  const json result = run_json("plot-grid --out " + svg + " --csv " + csv);
  CHECK(result.at("panels").size() == 9);

  const std::string svg_text = slurp(svg);
  int panels = 0;
  for (std::size_t pos = 0; (pos = svg_text.find("<g id=\"panel-", pos)) != std::string::npos;
       ++pos) {
    ++panels;
  }
  CHECK(panels == 9);
  CHECK(svg_text.find("viewBox=\"0 0 1200.0000 1200.0000\"") != std::string::npos);

  // Companion CSV: pinned header, 9 * 512 data rows, each panel integrating
  // to one by the trapezoid rule.
  const std::string csv_text = slurp(csv);
  CHECK(csv_text.rfind("theta,density\n", 0) == 0);
  std::vector<double> densities;
  std::istringstream lines(csv_text);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const std::size_t comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    densities.push_back(std::stod(line.substr(comma + 1)));
  }
  REQUIRE(densities.size() == 9 * 512);
  for (int panel = 0; panel < 9; ++panel) {
    double acc = 0.0;
    for (int k = 0; k < 512; ++k) acc += densities[panel * 512 + k];
    CHECK(acc * kTwoPi / 512.0 == Catch::Approx(1.0).margin(1e-9));
  }

  // Byte-for-byte deterministic.
  const std::string svg2 = dir + "/qc_cli_grid2.svg";
  run_json("plot-grid --out " + svg2 + " --csv " + dir + "/qc_cli_grid2.csv");
  CHECK(slurp(svg2) == svg_text);
  std::remove(svg.c_str());
  std::remove(csv.c_str());
  std::remove(svg2.c_str());
  std::remove((dir + "/qc_cli_grid2.csv").c_str());
}

TEST_CASE("plot-grid custom specs", "[cli]") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string spec = dir + "/qc_cli_spec.json";
  const std::string svg = dir + "/qc_cli_custom.svg";

  {
    std::ofstream out(spec);
    out << R"({"panels": [{"mu1": 0, "mu2": 0, "r1": 0, "r2": 0}]})";
  }
  const json flat = run_json("plot-grid --spec " + spec + " --out " + svg);
  CHECK(flat.at("panels").size() == 1);
  CHECK(flat.at("panels")[0].at("modality") == "uniform");
  const std::string csv_text = slurp(dir + "/qc_cli_custom.csv");
  std::istringstream lines(csv_text);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(v == Catch::Approx(1.0 / kTwoPi).margin(1e-15));
  }

  {
    std::ofstream out(spec);
    out << R"({"panels": [{"mu1": 1, "mu2": 1, "r1": 1, "r2": 1}]})";
  }
  const json bimodal = run_json("plot-grid --spec " + spec + " --out " + svg);
  CHECK(bimodal.at("panels")[0].at("modality") == "bimodal");
  CHECK(slurp(svg).find("bimodal") != std::string::npos);

  {
    std::ofstream out(spec);
    out << R"({"rows": "nonsense"})";
  }
  const CliResult bad = run_cli("plot-grid --spec " + spec + " --out " + svg);
  CHECK(bad.exit_code == 2);
  CHECK(json::parse(bad.out).at("error").at("code") == "InvalidSpec");

  std::remove(spec.c_str());
  std::remove(svg.c_str());
  std::remove((dir + "/qc_cli_custom.csv").c_str());
}

TEST_CASE("moments subcommand", "[cli]") {
  const json m = run_json("moments --mu1 0 --mu2 1.5707963267948966 --r1 1 --r2 1");
  CHECK(m.at("c1").at("re").get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-14));
  CHECK(m.at("c1").at("im").get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-14));
  CHECK(m.at("c2").at("im").get<double>() == Catch::Approx(1.0 / 3.0).margin(1e-14));
  const json single = run_json("moments --r1 1 --r2 1 --n 3");
  CHECK(single.at("moment").at("re").get<double>() == 0.0);
  // Negative orders conjugate; n = 0 must be distinguishable from "no --n".
  const json neg = run_json("moments --mu1 0 --mu2 1.5707963267948966 --r1 1 --r2 1 --n -1");
  CHECK(neg.at("moment").at("im").get<double>() == Catch::Approx(-1.0 / 3.0).margin(1e-14));
  const json zero = run_json("moments --r1 1 --r2 1 --n 0");
  CHECK(zero.at("moment").at("re").get<double>() == 1.0);
}

TEST_CASE("params can come from a JSON file", "[cli]") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string path = dir + "/qc_cli_params.json";
  {
    std::ofstream out(path);
    out << R"({"mu1": 0.3, "mu2": 2.7, "r1": 1.25, "r2": 0.5})";
  }
  const json direct = run_json("pdf --mu1 0.3 --mu2 2.7 --r1 1.25 --r2 0.5 --theta 5.1");
  const json from_file = run_json("pdf --params-json " + path + " --theta 5.1");
  CHECK(direct == from_file);

  {
    std::ofstream out(path);
    out << R"({"mu1": 0.3})";
  }
  const CliResult bad = run_cli("pdf --params-json " + path + " --theta 1");
  CHECK(bad.exit_code == 2);
  CHECK(json::parse(bad.out).at("error").at("code") == "InvalidSpec");
  std::remove(path.c_str());
}

TEST_CASE("fit rejects empty or tiny inputs", "[cli]") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string path = dir + "/qc_cli_empty.txt";
  {
    std::ofstream out(path);
    out << "# nothing but comments\n";
  }
  const CliResult empty = run_cli("fit --input " + path);
  CHECK(empty.exit_code == 2);
  CHECK(json::parse(empty.out).at("error").at("code") == "EmptySample");
  {
    std::ofstream out(path);
    out << "0.1\n0.2\n0.3\n0.4\n";
  }
  const CliResult four = run_cli("fit --input " + path);
  CHECK(four.exit_code == 2);
  CHECK(json::parse(four.out).at("error").at("code") == "TooFewObservations");
  std::remove(path.c_str());
}
