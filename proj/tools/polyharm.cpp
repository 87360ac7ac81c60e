// polyharm: classify nonlocal polyharmonic inequalities, build certified
// supersolutions, and run the radial diagnostics from the command line.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polyharm/barrier.hpp"
#include "polyharm/builder.hpp"
#include "polyharm/classifier.hpp"
#include "polyharm/profile.hpp"
#include "polyharm/riesz.hpp"

namespace {

using nlohmann::json;
using namespace polyharm;

constexpr int kSchemaVersion = 1;

std::string iso_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json load_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open input file: " + path);
  json j;
  is >> j;
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
    std::ostringstream msg;
    msg << "schema_version mismatch: file has " << j.at("schema_version")
        << ", this build expects " << kSchemaVersion;
    throw std::runtime_error(msg.str());
  }
  return j;
}

std::string csv_sibling(const std::string& out) {
  if (out.size() > 5 && out.compare(out.size() - 5, 5, ".json") == 0)
    return out.substr(0, out.size() - 5) + ".csv";
  return out + ".csv";
}

// stdout always gets the report; --output mirrors it to disk.  Timestamps
// live under "meta" so that config+result stay byte-identical across runs.
int emit(const json& config, const json& result, const std::string& output,
         int exit_code) {
  json report;
  report["config"] = config;
  report["result"] = result;
  report["meta"] = json{{"timestamp", iso_timestamp()}};
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!output.empty()) {
    std::ofstream os(output);
    if (!os) throw std::runtime_error("cannot open output file: " + output);
    os << text;
  }
  return exit_code;
}

json base_config(const std::string& command, const std::string& input,
                 const std::string& output, std::int64_t seed,
                 const json& parameters) {
  return json{{"command", command},   {"input", input},
              {"output", output},     {"schema_version", kSchemaVersion},
              {"seed", seed},         {"parameters", parameters}};
}

json decay_fit_json(const DecayFit& fit) {
  return json{{"label", to_string(fit.label)},
              {"fitted_exponent", fit.fitted_exponent},
              {"log_power", fit.log_power},
              {"r_squared", fit.r_squared},
              {"radii", fit.radii},
              {"values", fit.values}};
}

Construction construction_from_json(const json& j) {
  if (j.contains("result") && j.at("result").contains("construction"))
    return j.at("result").at("construction").get<Construction>();
  return j.get<Construction>();
}

struct GridFlags {
  double r_min = 0.0;
  double r_max = 0.0;
  int points = 0;
  double tol = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Existence and non-existence tooling for polyharmonic inequalities "
      "with a convolution nonlinearity"};
  app.require_subcommand(1);

  std::string input, output;
  std::int64_t seed = 0;
  GridFlags construct_grid, verify_grid, decay_grid;
  std::function<int()> run;

  const auto add_common = [&](CLI::App* cmd, bool need_input) {
    auto* in = cmd->add_option("--input", input, "parameter file (JSON)");
    if (need_input) in->required();
    cmd->add_option("--output", output, "report destination (JSON)");
    cmd->add_option("--seed", seed, "echoed into the report config");
    return cmd;
  };
  const auto add_grid = [](CLI::App* cmd, GridFlags& grid, double r_min,
                           double r_max, int points, double tol) {
    grid.r_min = r_min;
    grid.r_max = r_max;
    grid.points = points;
    grid.tol = tol;
    cmd->add_option("--grid-min", grid.r_min, "first radius");
    cmd->add_option("--grid-max", grid.r_max, "last radius");
    cmd->add_option("--grid-points", grid.points, "sample count");
    cmd->add_option("--tol", grid.tol, "tolerance");
  };

  // ---- classify ----
  {
    auto* cmd = add_common(app.add_subcommand("classify",
                                              "single inequality verdict"),
                           true);
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const ProblemParams params = j.get<ProblemParams>();
        const Verdict verdict = classify_single(params);
        const json config = base_config("classify", input, output, seed, j);
        return emit(config, json(verdict), output,
                    verdict.status == Status::Inconclusive ? 2 : 0);
      };
    });
  }

  // ---- classify-system ----
  {
    auto* cmd = add_common(app.add_subcommand("classify-system",
                                              "coupled system verdict"),
                           true);
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const SystemSpec spec = j.get<SystemSpec>();
        const SystemVerdict verdict = classify_system(spec);
        const json config =
            base_config("classify-system", input, output, seed, j);
        return emit(config, json(verdict), output, verdict.decisive ? 0 : 2);
      };
    });
  }

  // ---- construct ----
  {
    auto* cmd = add_common(app.add_subcommand("construct",
                                              "build a certified supersolution"),
                           true);
    BuildOptions defaults;
    add_grid(cmd, construct_grid, defaults.grid_min, defaults.grid_max,
             defaults.grid_points, defaults.quad_rel_tol);
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const BuilderParams params = j.get<BuilderParams>();
        BuildOptions opts;
        opts.grid_min = construct_grid.r_min;
        opts.grid_max = construct_grid.r_max;
        opts.grid_points = construct_grid.points;
        opts.quad_rel_tol = construct_grid.tol;
        const Construction cons = build_supersolution(params, opts);
        json config = base_config("construct", input, output, seed, j);
        config["grid_min"] = opts.grid_min;
        config["grid_max"] = opts.grid_max;
        config["grid_points"] = opts.grid_points;
        config["tol"] = opts.quad_rel_tol;
        if (!output.empty()) {
          SampledProfile u;
          u.radii = cons.phi.radii;
          const RadialField U = field_of(cons);
          u.values.resize(u.radii.size());
          for (size_t i = 0; i < u.radii.size(); ++i)
            u.values[i] = U.eval(u.radii[i]);
          u.tail_exponent = -cons.kappa;
          std::ofstream os(csv_sibling(output));
          if (!os) throw std::runtime_error("cannot open profile CSV");
          write_profile_csv(os, u);
        }
        return emit(config, json{{"construction", cons}}, output, 0);
      };
    });
  }

  // ---- verify ----
  {
    auto* cmd = add_common(app.add_subcommand("verify",
                                              "certify a stored construction"),
                           true);
    add_grid(cmd, verify_grid, 1e-2, 1e4, 200, 1e-8);
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const Construction cons = construction_from_json(j);
        const std::vector<double> radii =
            log_grid(verify_grid.r_min, verify_grid.r_max, verify_grid.points);
        const CertificationReport report =
            verify_supersolution(cons, radii, verify_grid.tol);
        const std::vector<LevelCheck> levels =
            polysuperharmonic_check(cons, radii);
        json config = base_config("verify", input, output, seed,
                                  json{{"construction_file", input}});
        config["grid_min"] = verify_grid.r_min;
        config["grid_max"] = verify_grid.r_max;
        config["grid_points"] = verify_grid.points;
        config["tol"] = verify_grid.tol;
        const json result{{"certification", report}, {"levels", levels}};
        return emit(config, result, output, report.pass ? 0 : 1);
      };
    });
  }

  // ---- decay-fit ----
  {
    auto* cmd = add_common(app.add_subcommand(
                               "decay-fit",
                               "decay trichotomy of a Riesz convolution"),
                           true);
    add_grid(cmd, decay_grid, 1e2, 1e3, 13, 0.0);
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const double alpha = j.at("alpha").get<double>();
        const int N = j.at("N").get<int>();
        const SampledProfile profile = j.at("profile").get<SampledProfile>();
        const DecayFit fit =
            decay_fit(alpha, field_of(profile), N, decay_grid.r_min,
                      decay_grid.r_max, decay_grid.points);
        json config = base_config("decay-fit", input, output, seed, j);
        config["grid_min"] = decay_grid.r_min;
        config["grid_max"] = decay_grid.r_max;
        config["grid_points"] = decay_grid.points;
        if (!output.empty()) {
          SampledProfile conv;
          conv.radii = fit.radii;
          conv.values = fit.values;
          std::ofstream os(csv_sibling(output));
          if (!os) throw std::runtime_error("cannot open convolution CSV");
          write_profile_csv(os, conv);
        }
        return emit(config, decay_fit_json(fit), output, 0);
      };
    });
  }

  // ---- region-csv ----
  {
    auto* cmd = add_common(app.add_subcommand(
                               "region-csv",
                               "existence region grid with boundary curves"),
                           true);
    cmd->get_option("--output")->required();
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const RegionTable table = region_boundary_table(
            j.at("N").get<int>(), j.at("m").get<int>(),
            j.at("alpha").get<double>(), j.at("p_lo").get<double>(),
            j.at("p_hi").get<double>(), j.at("q_lo").get<double>(),
            j.at("q_hi").get<double>(), j.at("samples").get<int>());
        const std::string csv = csv_sibling(output);
        std::ofstream os(csv);
        if (!os) throw std::runtime_error("cannot open region CSV");
        write_region_csv(os, table);
        int exists = 0, nonexist = 0, inconclusive = 0;
        for (const RegionRow& row : table.rows) {
          if (row.status == Status::ExistsNontrivial) ++exists;
          else if (row.status == Status::NoNontrivialSolution) ++nonexist;
          else ++inconclusive;
        }
        const json config = base_config("region-csv", input, output, seed, j);
        const json result{
            {"min_threshold", table.thresholds.min_threshold},
            {"sum_threshold", table.thresholds.sum_threshold},
            {"rows", table.rows.size()},
            {"exists", exists},
            {"no_nontrivial", nonexist},
            {"inconclusive", inconclusive},
            {"csv", csv}};
        return emit(config, result, output, 0);
      };
    });
  }

  // ---- potential ----
  {
    auto* cmd = add_common(app.add_subcommand(
                               "potential",
                               "iterated decaying radial potentials"),
                           true);
    cmd->get_option("--output")->required();
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const int N = j.at("N").get<int>();
        const int m = j.at("m").get<int>();
        const SampledProfile source = j.at("profile").get<SampledProfile>();
        const std::vector<SampledProfile> chain =
            newtonian_potential_chain(source, N, m);
        const std::string csv = csv_sibling(output);
        std::ofstream os(csv);
        if (!os) throw std::runtime_error("cannot open potential CSV");
        os << "radius,source";
        for (int k = 1; k <= m; ++k) os << ",W" << k;
        os << "\n";
        os.precision(17);
        for (size_t i = 0; i < source.radii.size(); ++i) {
          os << source.radii[i] << ',' << source.values[i];
          for (const SampledProfile& w : chain) os << ',' << w.values[i];
          os << "\n";
        }
        const json config = base_config("potential", input, output, seed, j);
        return emit(config, json{{"levels", chain}, {"csv", csv}}, output, 0);
      };
    });
  }

  // ---- barrier-report ----
  {
    auto* cmd = add_common(app.add_subcommand(
                               "barrier-report",
                               "cutoff-ratio ladder and plateau bound"),
                           true);
    cmd->callback([&] {
      run = [&]() {
        const json j = load_input(input);
        const int N = j.at("N").get<int>();
        const int m = j.at("m").get<int>();
        const double p = j.at("p").get<double>();
        const double q = j.at("q").get<double>();
        RadialField u;
        if (j.contains("construction"))
          u = field_of(j.at("construction").get<Construction>());
        else
          u = field_of(j.at("profile").get<SampledProfile>());
        std::vector<double> ladder = default_cutoff_ladder();
        if (j.contains("ladder"))
          ladder = j.at("ladder").get<std::vector<double>>();
        const CutoffEstimate est =
            cutoff_integral_estimate(u, N, m, p, q, ladder);
        const PsiBoundCheck psi = check_psi_cutoff_bound(N, m);
        if (!output.empty()) {
          std::ofstream os(csv_sibling(output));
          if (!os) throw std::runtime_error("cannot open ratio CSV");
          os << "R,ratio\n";
          os.precision(17);
          for (size_t i = 0; i < est.R_values.size(); ++i)
            os << est.R_values[i] << ',' << est.ratios[i] << "\n";
        }
        const json config =
            base_config("barrier-report", input, output, seed, j);
        const json result{{"cutoff", est}, {"psi_bound", psi}};
        const int code = est.degenerate ? 2 : (est.pass ? 0 : 1);
        return emit(config, result, output, code);
      };
    });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return run();
  } catch (const std::exception& ex) {
    std::cerr << json{{"error", ex.what()}}.dump(2) << "\n";
    return 1;
  }
}
