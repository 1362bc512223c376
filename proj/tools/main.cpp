#include "varfield/electrodynamics.hpp"
#include "varfield/errors.hpp"
#include "varfield/euler_lagrange.hpp"
#include "varfield/json_io.hpp"
#include "varfield/numeric.hpp"
#include "varfield/parser.hpp"
#include "varfield/transform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _WIN32
#include <io.h>
#define isatty _isatty
#define fileno _fileno
#else
#include <unistd.h>
#endif

namespace {

using namespace varfield;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

bool use_color() {
    const char* env = std::getenv("VARFIELD_COLOR");
    if (env && std::string(env) == "0") return false;
    return isatty(fileno(stdout)) != 0;
}

std::string colored(const std::string& text, bool ok) {
    if (!use_color()) return text;
    return (ok ? "\033[32m" : "\033[31m") + text + "\033[0m";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + out_path + "'");
    out << text;
}

struct CommonOpts {
    std::string format{"text"};
    std::string out_path;
};

int cmd_derive(const std::string& lag_path, const CommonOpts& opts) {
    LagrangianDef L = parse_lagrangian(read_file(lag_path));
    std::vector<Equation> eqs = derive_all(L);
    std::ostringstream os;
    if (opts.format == "json") {
        os << equations_to_json(eqs) << "\n";
    } else {
        for (const auto& eq : eqs) {
            os << eq.field;
            if (eq.comp > 0) os << "[" << eq.comp << "]";
            os << ": 0 = " << eq.lhs.str() << "\n";
        }
    }
    write_output(opts.out_path, os.str());
    return kExitOk;
}

int cmd_transform(const std::string& lag_path, const std::string& map_path,
                  const CommonOpts& opts) {
    LagrangianDef L = parse_lagrangian(read_file(lag_path));
    TransformDef T = parse_transform(read_file(map_path));
    TransformedLagrangian tl = transform_lagrangian(L, T);
    std::ostringstream os;
    os << "# transformed Lagrangian in barred variables\n";
    os << "# det_sign: " << (tl.det_sign == DetSign::positive ? "positive" : "negative")
       << "\n";
    os << "# det: " << tl.det.str() << "\n";
    os << render_lagrangian(tl.base);
    write_output(opts.out_path, os.str());
    return kExitOk;
}

int cmd_check(const std::string& lag_path, int nt, int nx, int levels, double eps,
              std::uint64_t seed, int variations, const CommonOpts& opts) {
    if (levels < 3)
        throw Error(ErrorCode::GridTooCoarse, "convergence runs need at least 3 levels");
    LagrangianDef L = parse_lagrangian(read_file(lag_path));

    GridSpec base;
    base.n_t = nt;
    base.n_x = nx;
    base.validate();

    FieldSet trial;
    {
        std::uint64_t k = 0;
        for (const auto& f : L.fields) {
            AnalyticField af = make_trial_field(f.name, f.ncomp, seed + 1000 * (++k));
            // Attach the Lagrangian's constant table for density evaluation.
            std::vector<Expr> comps;
            for (int c : af.comp_indices()) comps.push_back(af.component(c));
            trial.emplace(f.name, AnalyticField(f.name, std::move(comps), L.constants));
        }
    }

    std::vector<Equation> eqs = derive_all(L);
    RefinementStudy variation_study;
    RefinementStudy residual_study;

    GridSpec g = base;
    for (int lvl = 0; lvl < levels; ++lvl) {
        double e = eps > 0 ? eps : default_variation_eps(g, trial);
        double sq_diff = 0.0;
        double sq_val = 0.0;
        for (int v = 0; v < variations; ++v) {
            FieldSet dvar;
            std::uint64_t k = 0;
            for (const auto& f : L.fields) {
                ++k;
                if (f.is_source) continue; // sources are prescribed, not varied
                dvar.emplace(f.name, make_variation(f.name, f.ncomp, g,
                                                    seed + 7919 * (v + 1) + k));
            }
            double direct = delta_s_direct(L, g, trial, dvar, e);
            double by_parts = delta_s_by_parts(L, g, trial, dvar);
            sq_diff += (direct - by_parts) * (direct - by_parts);
            sq_val += direct * direct;
        }
        double rms_diff = std::sqrt(sq_diff / variations);
        double rms_val = std::sqrt(sq_val / variations);
        variation_study.rows.push_back({g.spacing(1), rms_val, rms_diff});

        double sq_res = 0.0;
        for (const auto& eq : eqs) {
            double r = residual_norm(eq, g, trial, L.constants);
            sq_res += r * r;
        }
        residual_study.rows.push_back({g.spacing(1), std::sqrt(sq_res), std::sqrt(sq_res)});

        g = g.refined();
    }

    auto fit = [](RefinementStudy& s) {
        std::vector<double> hs, errs;
        for (const auto& r : s.rows) {
            hs.push_back(r.h);
            errs.push_back(r.error);
        }
        s.estimated_order = estimate_order(hs, errs);
    };
    fit(variation_study);
    fit(residual_study);

    bool pass = variation_study.estimated_order >= 1.7 && variation_study.estimated_order <= 2.3;

    std::ostringstream os;
    if (opts.format == "csv") {
        os << "# seed=" << seed << "\n";
        os << "# study=variation_identity\n" << to_csv(variation_study);
        os << "# study=residual\n" << to_csv(residual_study);
    } else {
        os << "seed: " << seed << "\n";
        os << "variation identity |dS_direct - dS_by_parts|:\n" << to_csv(variation_study);
        os << "estimated order: " << variation_study.estimated_order << "\n";
        os << "residual RMS at the trial field (reported, not gated):\n"
           << to_csv(residual_study);
        os << (pass ? colored("PASS", true) : colored("FAIL", false))
           << " convergence order in [1.7, 2.3]\n";
    }
    write_output(opts.out_path, os.str());
    return pass ? kExitOk : kExitDomain;
}

int cmd_demo_em(const std::string& targets_path, const CommonOpts& opts) {
    EmSystem sys = build_em_system();
    if (!targets_path.empty()) {
        sys.targets = equations_from_fixture_json(read_file(targets_path));
        sys.target_normalizations.assign(sys.targets.size(), "(fixture)");
    }
    EmReport rep = verify_em(sys);

    std::ostringstream os;
    if (opts.format == "json") {
        os << em_report_to_json(rep) << "\n";
    } else {
        os << "equation      match  normalization\n";
        for (const auto& c : rep.comparisons) {
            std::string name = c.field + (c.comp > 0 ? "[" + std::to_string(c.comp) + "]" : "");
            os << name;
            for (std::size_t k = name.size(); k < 14; ++k) os << ' ';
            os << (c.match ? colored("yes", true) : colored("NO ", false)) << "    "
               << (c.match ? c.normalization : "-") << "\n";
        }
        os << "curl-curl identity: "
           << (rep.curl_curl_identity ? colored("yes", true) : colored("NO", false)) << "\n";
        os << (rep.all_match() ? colored("PASS", true) : colored("FAIL", false))
           << " all derived equations match the potential-form Maxwell equations\n";
    }
    write_output(opts.out_path, os.str());
    return rep.all_match() ? kExitOk : kExitDomain;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"varfield: Lagrangian field theory symbolic engine and checker"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string lag_path, map_path, targets_path;
    int nt = 9, nx = 9, levels = 3, variations = 20;
    double eps = 0.0;
    std::uint64_t seed = 12345;

    auto add_common = [&](CLI::App* cmd, bool csv_ok) {
        cmd->add_option("--format", opts.format,
                        csv_ok ? "Output format: text, csv, json" : "Output format: text, json");
        cmd->add_option("--out", opts.out_path, "Write output to a file instead of stdout");
    };

    auto* derive = app.add_subcommand("derive", "Derive Euler-Lagrange equations");
    derive->add_option("lagrangian", lag_path, "Input .lag file")->required();
    add_common(derive, false);

    auto* transform = app.add_subcommand("transform", "Transform a Lagrangian");
    transform->add_option("lagrangian", lag_path, "Input .lag file")->required();
    transform->add_option("map", map_path, "Input .map file")->required();
    add_common(transform, false);

    auto* check = app.add_subcommand("check", "Variational identity refinement study");
    check->add_option("lagrangian", lag_path, "Input .lag file")->required();
    check->add_option("--nt", nt, "Base time nodes");
    check->add_option("--nx", nx, "Base space nodes per axis");
    check->add_option("--levels", levels, "Refinement levels (>= 3)");
    check->add_option("--eps", eps, "Variation step (default 1e-5*(1+|psi|_inf))");
    check->add_option("--seed", seed, "Random seed");
    check->add_option("--variations", variations, "Number of random variations");
    add_common(check, true);

    auto* demo = app.add_subcommand("demo-em", "Electrodynamics worked example");
    demo->add_option("--targets", targets_path, "Target equations fixture (JSON)");
    add_common(demo, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(derive)) return cmd_derive(lag_path, opts);
        if (app.got_subcommand(transform)) return cmd_transform(lag_path, map_path, opts);
        if (app.got_subcommand(check))
            return cmd_check(lag_path, nt, nx, levels, eps, seed, variations, opts);
        if (app.got_subcommand(demo)) return cmd_demo_em(targets_path, opts);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return e.code() == ErrorCode::Io ? kExitIo : kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}
