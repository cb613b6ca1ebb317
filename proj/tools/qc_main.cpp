// Command-line interface for the quadratic cardioid distribution library.
//
// Every subcommand prints JSON to standard output (line-oriented CSV with
// --format csv); plot-grid additionally writes an SVG panel grid and a
// companion CSV. Exit codes: 0 success, 1 usage errors, 2 domain errors
// (reported as a machine-readable {"error": ...} object).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcirc/qcirc.hpp"

using json = nlohmann::json;
using namespace qcirc;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json params_to_json(const QCParams& p) {
  return json{{"mu1", p.mu1.radians()}, {"mu2", p.mu2.radians()}, {"r1", p.r1}, {"r2", p.r2}};
}

// Parses the literal "a+bi" form ("1.5", "-2i", "0.3-0.25i", ...).
Complex parse_complex(const std::string& text) {
  const std::string err = "expected complex literal like 1.0-0.5i, got '" + text + "'";
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw CLI::ValidationError(err);
  double re = 0.0, im = 0.0;
  const char* ptr = s.c_str();
  char* end = nullptr;
  double first = std::strtod(ptr, &end);
  if (end == ptr) {
    // Pure imaginary with implicit coefficient: "i", "-i".
    if (s == "i" || s == "+i") return Complex(0.0, 1.0);
    if (s == "-i") return Complex(0.0, -1.0);
    throw CLI::ValidationError(err);
  }
  if (*end == '\0') {
    re = first;
  } else if (*end == 'i' || *end == 'j') {
    if (*(end + 1) != '\0') throw CLI::ValidationError(err);
    im = first;
  } else {
    re = first;
    ptr = end;
    if (*ptr == '+' && (*(ptr + 1) == 'i' || *(ptr + 1) == 'j') && *(ptr + 2) == '\0') {
      im = 1.0;
    } else if (*ptr == '-' && (*(ptr + 1) == 'i' || *(ptr + 1) == 'j') && *(ptr + 2) == '\0') {
      im = -1.0;
    } else {
      double second = std::strtod(ptr, &end);
      if (end == ptr || !(*end == 'i' || *end == 'j') || *(end + 1) != '\0') {
        throw CLI::ValidationError(err);
      }
      im = second;
    }
  }
  return Complex(re, im);
}

struct ParamsOptions {
  double mu1 = 0.0, mu2 = 0.0, r1 = 0.0, r2 = 0.0;
  std::string params_file;
  bool degrees = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mu1", mu1, "First angle parameter (radians)");
    cmd->add_option("--mu2", mu2, "Second angle parameter (radians)");
    cmd->add_option("--r1", r1, "First radius parameter (>= 0)");
    cmd->add_option("--r2", r2, "Second radius parameter (>= 0)");
    cmd->add_option("--params-json", params_file, "JSON file with mu1, mu2, r1, r2");
    cmd->add_flag("--degrees", degrees, "Interpret input angles as degrees");
  }

  Angle in_angle(double value) const {
    return degrees ? Angle::from_degrees(value) : Angle(value);
  }

  QCParams build() const {
    double m1 = mu1, m2 = mu2, a = r1, b = r2;
    if (!params_file.empty()) {
      std::ifstream in(params_file);
      if (!in) throw DomainError(ErrorCode::InvalidSpec, "cannot open " + params_file);
      json spec;
      try {
        in >> spec;
        m1 = spec.at("mu1").get<double>();
        m2 = spec.at("mu2").get<double>();
        a = spec.at("r1").get<double>();
        b = spec.at("r2").get<double>();
      } catch (const json::exception& e) {
        throw DomainError(ErrorCode::InvalidSpec, std::string("bad params file: ") + e.what());
      }
    }
    return QCParams(in_angle(m1), in_angle(m2), a, b);
  }
};

// Flattens a JSON object into key,value CSV rows; used for subcommands
// without a natural table layout.
void flatten_csv(const json& node, const std::string& prefix, std::string& out) {
  if (node.is_object()) {
    for (const auto& item : node.items()) {
      flatten_csv(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten_csv(node[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else if (node.is_number_float()) {
    out += prefix + "," + fmt17(node.get<double>()) + "\n";
  } else {
    out += prefix + "," + node.dump() + "\n";
  }
}

void emit(const json& result, bool csv) {
  if (csv) {
    std::string out = "key,value\n";
    flatten_csv(result, "", out);
    std::fputs(out.c_str(), stdout);
  } else {
    std::fputs((result.dump(2) + "\n").c_str(), stdout);
  }
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  // QC_SEED, when set, takes precedence over --seed.
  if (const char* env = std::getenv("QC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("QC_SEED must be an unsigned integer");
    }
  }
  return flag_seed;
}

std::string modality_label(const QCParams& p) {
  if (p.r1 == 0.0 && p.r2 == 0.0) return "uniform";
  return classify_stationary(p).unimodal ? "unimodal" : "bimodal";
}

json stationary_to_json(const std::vector<StationaryPoint>& points) {
  json arr = json::array();
  for (const StationaryPoint& sp : points) {
    arr.push_back({{"theta", sp.theta.radians()}, {"density", sp.density}, {"flat", sp.flat}});
  }
  return arr;
}

// ---------------------------------------------------------------------------
// plot-grid

struct PanelLayout {
  std::vector<GridPanel> panels;
  std::size_t rows = 0;
  std::size_t columns = 0;
};

PanelLayout load_panel_spec(const std::string& path) {
  PanelLayout layout;
  if (path.empty()) {
    layout.panels = default_panel_grid();
    layout.rows = layout.columns = 3;
    return layout;
  }
  std::ifstream in(path);
  if (!in) throw DomainError(ErrorCode::InvalidSpec, "cannot open " + path);
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw DomainError(ErrorCode::InvalidSpec, std::string("bad grid spec: ") + e.what());
  }
  try {
    if (spec.contains("panels")) {
      const auto& panels = spec.at("panels");
      if (!panels.is_array() || panels.empty()) {
        throw DomainError(ErrorCode::InvalidSpec, "panels must be a nonempty array");
      }
      layout.columns = static_cast<std::size_t>(
          std::ceil(std::sqrt(static_cast<double>(panels.size()))));
      layout.rows = (panels.size() + layout.columns - 1) / layout.columns;
      std::size_t index = 0;
      for (const auto& cell : panels) {
        GridPanel panel;
        panel.params = QCParams(Angle(cell.at("mu1").get<double>()),
                                Angle(cell.at("mu2").get<double>()),
                                cell.at("r1").get<double>(), cell.at("r2").get<double>());
        panel.row = index / layout.columns;
        panel.column = index % layout.columns;
        layout.panels.push_back(panel);
        ++index;
      }
    } else {
      const auto& columns = spec.at("columns");
      const auto& rows = spec.at("rows");
      if (!columns.is_array() || !rows.is_array() || columns.empty() || rows.empty()) {
        throw DomainError(ErrorCode::InvalidSpec, "columns and rows must be nonempty arrays");
      }
      layout.columns = columns.size();
      layout.rows = rows.size();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
          GridPanel panel;
          panel.params = QCParams(Angle(columns[j].at("mu1").get<double>()),
                                  Angle(rows[i].at("mu2").get<double>()),
                                  columns[j].at("r1").get<double>(),
                                  rows[i].at("r2").get<double>());
          panel.row = i;
          panel.column = j;
          layout.panels.push_back(panel);
        }
      }
    }
  } catch (const json::exception& e) {
    throw DomainError(ErrorCode::InvalidSpec, std::string("bad grid spec: ") + e.what());
  }
  return layout;
}

std::string fmt_svg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string render_grid_svg(const PanelLayout& layout,
                            const std::vector<DensityGrid>& grids,
                            const std::vector<std::string>& labels) {
  const double cell = 400.0;
  const double width = cell * double(layout.columns);
  const double height = cell * double(layout.rows);
  const double margin = 40.0;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_svg(width) + "\" height=\"" +
         fmt_svg(height) + "\" viewBox=\"0 0 " + fmt_svg(width) + " " + fmt_svg(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < layout.panels.size(); ++k) {
    const GridPanel& panel = layout.panels[k];
    const DensityGrid& grid = grids[k];
    const double x0 = cell * double(panel.column) + margin;
    const double y0 = cell * double(panel.row) + margin;
    const double w = cell - 2.0 * margin;
    const double h = cell - 2.0 * margin;
    double ymax = 0.0;
    for (double v : grid.values) ymax = std::max(ymax, v);
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.05;
    svg += "<g id=\"panel-" + std::to_string(k) + "\">\n";
    svg += "<rect x=\"" + fmt_svg(x0) + "\" y=\"" + fmt_svg(y0) + "\" width=\"" + fmt_svg(w) +
           "\" height=\"" + fmt_svg(h) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
      const double px = x0 + w * grid.thetas[i] / kTwoPi;
      const double py = y0 + h * (1.0 - grid.values[i] / ymax);
      if (i) svg += " ";
      svg += fmt_svg(px) + "," + fmt_svg(py);
    }
    svg += "\"/>\n";
    const QCParams& p = panel.params;
    svg += "<text x=\"" + fmt_svg(x0) + "\" y=\"" + fmt_svg(y0 - 12.0) +
           "\" font-family=\"monospace\" font-size=\"13\">QC(" + fmt_param(p.mu1.radians()) +
           ", " + fmt_param(p.mu2.radians()) + ", " + fmt_param(p.r1) + ", " + fmt_param(p.r2) +
           ") " + labels[k] + "</text>\n";
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

int run_plot_grid(const std::string& spec_path, const std::string& out_path,
                  std::string csv_path, std::size_t samples, bool csv_format) {
  const PanelLayout layout = load_panel_spec(spec_path);
  std::vector<DensityGrid> grids;
  std::vector<std::string> labels;
  grids.reserve(layout.panels.size());
  for (const GridPanel& panel : layout.panels) {
    grids.push_back(make_density_grid(panel.params, samples));
    labels.push_back(modality_label(panel.params));
  }
  if (csv_path.empty()) {
    csv_path = out_path;
    const std::size_t dot = csv_path.rfind('.');
    if (dot != std::string::npos) csv_path.resize(dot);
    csv_path += ".csv";
  }

  std::ofstream svg_out(out_path, std::ios::binary);
  if (!svg_out) throw DomainError(ErrorCode::InvalidSpec, "cannot write " + out_path);
  svg_out << render_grid_svg(layout, grids, labels);
  svg_out.close();

  std::ofstream csv_out(csv_path, std::ios::binary);
  if (!csv_out) throw DomainError(ErrorCode::InvalidSpec, "cannot write " + csv_path);
  csv_out << "theta,density\n";
  for (const DensityGrid& grid : grids) {
    for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
      csv_out << fmt17(grid.thetas[i]) << "," << fmt17(grid.values[i]) << "\n";
    }
  }
  csv_out.close();

  json result;
  result["svg"] = out_path;
  result["csv"] = csv_path;
  result["panels"] = json::array();
  for (std::size_t k = 0; k < layout.panels.size(); ++k) {
    result["panels"].push_back({{"params", params_to_json(layout.panels[k].params)},
                                {"modality", labels[k]},
                                {"row", layout.panels[k].row},
                                {"column", layout.panels[k].column}});
  }
  emit(result, csv_format);
  return 0;
}

std::vector<Angle> read_angles(const std::string& path, bool degrees) {
  std::vector<Angle> angles;
  std::istream* in = &std::cin;
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw DomainError(ErrorCode::InvalidSpec, "cannot open " + path);
    in = &file;
  }
  std::string line;
  while (std::getline(*in, line)) {
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      const double value = std::stod(line.substr(start));
      angles.push_back(degrees ? Angle::from_degrees(value) : Angle(value));
    } catch (const std::exception&) {
      throw DomainError(ErrorCode::InvalidSpec, "bad angle line: " + line);
    }
  }
  return angles;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic cardioid circular distributions"};
  app.require_subcommand(1);

  std::string format = "json";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format: json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  // pdf
  auto pdf_opts = std::make_shared<ParamsOptions>();
  auto pdf_theta = std::make_shared<double>(0.0);
  CLI::App* pdf_cmd = app.add_subcommand("pdf", "Evaluate the density at an angle");
  pdf_opts->attach(pdf_cmd);
  pdf_cmd->add_option("--theta", *pdf_theta, "Evaluation angle")->required();
  add_format(pdf_cmd);
  pdf_cmd->callback([&, pdf_opts, pdf_theta]() {
    const QCParams p = pdf_opts->build();
    const Angle theta = pdf_opts->in_angle(*pdf_theta);
    if (format == "csv") {
      std::fputs(("theta,density\n" + fmt17(theta.radians()) + "," + fmt17(pdf(p, theta)) + "\n").c_str(),
                 stdout);
    } else {
      emit(json{{"pdf", pdf(p, theta)}}, false);
    }
  });

  // cdf
  auto cdf_opts = std::make_shared<ParamsOptions>();
  auto cdf_theta = std::make_shared<double>(0.0);
  auto cdf_origin = std::make_shared<double>(0.0);
  CLI::App* cdf_cmd = app.add_subcommand("cdf", "Probability of an arc from an origin");
  cdf_opts->attach(cdf_cmd);
  cdf_cmd->add_option("--theta", *cdf_theta, "Arc end angle")->required();
  cdf_cmd->add_option("--origin", *cdf_origin, "Arc start angle (default 0)");
  add_format(cdf_cmd);
  cdf_cmd->callback([&, cdf_opts, cdf_theta, cdf_origin]() {
    const QCParams p = cdf_opts->build();
    emit(json{{"cdf", cdf(p, cdf_opts->in_angle(*cdf_theta), cdf_opts->in_angle(*cdf_origin))}},
         format == "csv");
  });

  // moments
  auto mom_opts = std::make_shared<ParamsOptions>();
  auto mom_n = std::make_shared<int>(0);
  CLI::App* mom_cmd = app.add_subcommand("moments", "Trigonometric moments c1 and c2");
  mom_opts->attach(mom_cmd);
  CLI::Option* mom_n_opt =
      mom_cmd->add_option("--n", *mom_n, "Single moment order instead of the pair");
  add_format(mom_cmd);
  mom_cmd->callback([&, mom_opts, mom_n, mom_n_opt]() {
    const QCParams p = mom_opts->build();
    json result;
    if (mom_n_opt->count() > 0) {
      result = json{{"n", *mom_n}, {"moment", complex_to_json(trig_moment(p, *mom_n))}};
    } else {
      const TrigMoments m = moments_from_params(p);
      result = json{{"c1", complex_to_json(m.c1)}, {"c2", complex_to_json(m.c2)}};
    }
    emit(result, format == "csv");
  });

  // summary
  auto sum_opts = std::make_shared<ParamsOptions>();
  CLI::App* sum_cmd = app.add_subcommand("summary", "Mean direction and resultant length");
  sum_opts->attach(sum_cmd);
  add_format(sum_cmd);
  sum_cmd->callback([&, sum_opts]() {
    const SummaryStats s = summary(sum_opts->build());
    emit(json{{"mean_direction", s.mean_direction.radians()},
              {"resultant_length", s.resultant_length},
              {"circular_variance", s.circular_variance}},
         format == "csv");
  });

  // modes
  auto modes_opts = std::make_shared<ParamsOptions>();
  CLI::App* modes_cmd = app.add_subcommand("modes", "Classified stationary points");
  modes_opts->attach(modes_cmd);
  add_format(modes_cmd);
  modes_cmd->callback([&, modes_opts]() {
    const StationaryReport report = classify_stationary(modes_opts->build());
    json result{{"modes", stationary_to_json(report.modes)},
                {"antimodes", stationary_to_json(report.antimodes)},
                {"unimodal", report.unimodal}};
    if (!report.inflections.empty()) result["inflections"] = stationary_to_json(report.inflections);
    emit(result, format == "csv");
  });

  // median
  auto med_opts = std::make_shared<ParamsOptions>();
  auto med_rule = std::make_shared<std::string>("deviation");
  CLI::App* med_cmd = app.add_subcommand("median", "Median candidates and selection");
  med_opts->attach(med_cmd);
  med_cmd->add_option("--rule", *med_rule, "Selection rule: deviation (default) or cosine")
      ->check(CLI::IsMember({"deviation", "cosine"}));
  add_format(med_cmd);
  med_cmd->callback([&, med_opts, med_rule]() {
    const MedianRule rule =
        *med_rule == "cosine" ? MedianRule::NonpositiveCosine : MedianRule::MinAbsDeviation;
    const MedianResult result = median(med_opts->build(), rule);
    emit(json{{"median", result.selected.radians()},
              {"candidates",
               {result.candidates[0].radians(), result.candidates[1].radians()}},
              {"mean_abs_deviation",
               {result.mean_abs_deviation[0], result.mean_abs_deviation[1]}},
              {"rule", *med_rule}},
         format == "csv");
  });

  // symmetry
  auto sym_opts = std::make_shared<ParamsOptions>();
  CLI::App* sym_cmd = app.add_subcommand("symmetry", "Reflection symmetry report");
  sym_opts->attach(sym_cmd);
  add_format(sym_cmd);
  sym_cmd->callback([&, sym_opts]() {
    const SymmetryReport report = detect_symmetry(sym_opts->build());
    json result{{"symmetric", report.symmetric}, {"case", to_string(report.kind)}};
    if (report.symmetric) {
      result["axis"] = report.axis->radians();
      result["antipodal_axis"] = report.antipodal_axis->radians();
      result["reflection_residual"] = report.reflection_residual;
    }
    emit(result, format == "csv");
  });

  // sample
  auto smp_opts = std::make_shared<ParamsOptions>();
  auto smp_n = std::make_shared<std::size_t>(0);
  auto smp_seed = std::make_shared<std::uint64_t>(0);
  CLI::App* smp_cmd = app.add_subcommand("sample", "Draw by rejection sampling");
  smp_opts->attach(smp_cmd);
  smp_cmd->add_option("--n", *smp_n, "Number of draws")->required();
  smp_cmd->add_option("--seed", *smp_seed, "RNG seed (QC_SEED env overrides)");
  add_format(smp_cmd);
  smp_cmd->callback([&, smp_opts, smp_n, smp_seed]() {
    const SampleBatch batch = sample(smp_opts->build(), *smp_n, effective_seed(*smp_seed));
    if (format == "csv") {
      std::string out = "theta\n";
      for (const Angle& a : batch.angles) out += fmt17(a.radians()) + "\n";
      std::fputs(out.c_str(), stdout);
    } else {
      json angles = json::array();
      for (const Angle& a : batch.angles) angles.push_back(a.radians());
      emit(json{{"seed", batch.seed},
                {"n", batch.angles.size()},
                {"proposals_used", batch.proposals_used},
                {"angles", angles}},
           false);
    }
  });

  // fit
  auto fit_opts = std::make_shared<ParamsOptions>();
  auto fit_input = std::make_shared<std::string>("-");
  CLI::App* fit_cmd = app.add_subcommand("fit", "Method-of-moments parameter estimate");
  fit_cmd->add_option("--input", *fit_input, "Angle file, one radian value per line ('-' = stdin)");
  fit_cmd->add_flag("--degrees", fit_opts->degrees, "Interpret input angles as degrees");
  add_format(fit_cmd);
  fit_cmd->callback([&, fit_opts, fit_input]() {
    const std::vector<Angle> angles = read_angles(*fit_input, fit_opts->degrees);
    const FitResult result = fit(angles);
    emit(json{{"params", params_to_json(result.params)},
              {"raw_moments",
               {{"c1", complex_to_json(result.raw_moments.c1)},
                {"c2", complex_to_json(result.raw_moments.c2)}}},
              {"shrink_factor", result.shrink_factor},
              {"projected", result.projected},
              {"perturbed", result.perturbed}},
         format == "csv");
  });

  // member
  auto mem_c1 = std::make_shared<std::string>("0");
  auto mem_c2 = std::make_shared<std::string>("0");
  CLI::App* mem_cmd = app.add_subcommand("member", "Degree-2 moment-class membership");
  mem_cmd->add_option("--c1", *mem_c1, "First moment, literal a+bi")->required();
  mem_cmd->add_option("--c2", *mem_c2, "Second moment, literal a+bi")->required();
  add_format(mem_cmd);
  mem_cmd->callback([&, mem_c1, mem_c2]() {
    const TrigMoments m{parse_complex(*mem_c1), parse_complex(*mem_c2)};
    const MembershipReport report = analyze_moments(m);
    json result{{"in_T2pi", report.in_class},
                {"determinants", {report.minors[0], report.minors[1], report.minors[2]}},
                {"min_density", report.min_density},
                {"argmin", report.argmin.radians()},
                {"qc_representable", report.qc_representable}};
    if (report.qc_params) result["qc_params"] = params_to_json(*report.qc_params);
    emit(result, format == "csv");
  });

  // factor
  auto fac_c1 = std::make_shared<std::string>("0");
  auto fac_c2 = std::make_shared<std::string>("0");
  CLI::App* fac_cmd = app.add_subcommand("factor", "Spectral factorization of a moment pair");
  fac_cmd->add_option("--c1", *fac_c1, "First moment, literal a+bi")->required();
  fac_cmd->add_option("--c2", *fac_c2, "Second moment, literal a+bi")->required();
  add_format(fac_cmd);
  fac_cmd->callback([&, fac_c1, fac_c2]() {
    const Factorization f = factorize_moments({parse_complex(*fac_c1), parse_complex(*fac_c2)});
    json candidates = json::array();
    for (const QCParams& c : f.candidates) candidates.push_back(params_to_json(c));
    emit(json{{"params", params_to_json(f.params)},
              {"factor",
               {{"a0", complex_to_json(f.factor.a0)},
                {"a1", complex_to_json(f.factor.a1)},
                {"a2", complex_to_json(f.factor.a2)}}},
              {"candidates", candidates}},
         format == "csv");
  });

  // convolve
  auto conv_args = std::make_shared<std::array<std::string, 4>>();
  CLI::App* conv_cmd = app.add_subcommand("convolve", "Moments of the convolution");
  conv_cmd->add_option("--a-c1", (*conv_args)[0], "c1 of the first measure")->required();
  conv_cmd->add_option("--a-c2", (*conv_args)[1], "c2 of the first measure")->required();
  conv_cmd->add_option("--b-c1", (*conv_args)[2], "c1 of the second measure")->required();
  conv_cmd->add_option("--b-c2", (*conv_args)[3], "c2 of the second measure")->required();
  add_format(conv_cmd);
  conv_cmd->callback([&, conv_args]() {
    const TrigMoments out =
        convolve({parse_complex((*conv_args)[0]), parse_complex((*conv_args)[1])},
                 {parse_complex((*conv_args)[2]), parse_complex((*conv_args)[3])});
    emit(json{{"c1", complex_to_json(out.c1)}, {"c2", complex_to_json(out.c2)}}, format == "csv");
  });

  // mix
  auto mix_args = std::make_shared<std::array<std::string, 4>>();
  auto mix_w = std::make_shared<double>(0.5);
  CLI::App* mix_cmd = app.add_subcommand("mix", "Moments of the mixture");
  mix_cmd->add_option("--a-c1", (*mix_args)[0], "c1 of the first measure")->required();
  mix_cmd->add_option("--a-c2", (*mix_args)[1], "c2 of the first measure")->required();
  mix_cmd->add_option("--b-c1", (*mix_args)[2], "c1 of the second measure")->required();
  mix_cmd->add_option("--b-c2", (*mix_args)[3], "c2 of the second measure")->required();
  mix_cmd->add_option("--weight", *mix_w, "Weight of the first measure, in [0, 1]")->required();
  add_format(mix_cmd);
  mix_cmd->callback([&, mix_args, mix_w]() {
    const TrigMoments out =
        mix({parse_complex((*mix_args)[0]), parse_complex((*mix_args)[1])},
            {parse_complex((*mix_args)[2]), parse_complex((*mix_args)[3])}, *mix_w);
    emit(json{{"c1", complex_to_json(out.c1)}, {"c2", complex_to_json(out.c2)}}, format == "csv");
  });

  // plot-grid
  auto pg_spec = std::make_shared<std::string>("");
  auto pg_out = std::make_shared<std::string>("qc-grid.svg");
  auto pg_csv = std::make_shared<std::string>("");
  auto pg_samples = std::make_shared<std::size_t>(512);
  CLI::App* pg_cmd = app.add_subcommand("plot-grid", "Density panel grid as SVG plus CSV");
  pg_cmd->add_option("--spec", *pg_spec, "JSON grid spec (default: built-in 3x3 grid)");
  pg_cmd->add_option("--out", *pg_out, "Output SVG path");
  pg_cmd->add_option("--csv", *pg_csv, "Companion CSV path (default: SVG path with .csv)");
  pg_cmd->add_option("--samples", *pg_samples, "Samples per panel (default 512)");
  add_format(pg_cmd);
  pg_cmd->callback([&, pg_spec, pg_out, pg_csv, pg_samples]() {
    run_plot_grid(*pg_spec, *pg_out, *pg_csv, *pg_samples, format == "csv");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DomainError& e) {
    json err{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    std::fputs((err.dump(2) + "\n").c_str(), stdout);
    return 2;
  }
  return 0;
}
