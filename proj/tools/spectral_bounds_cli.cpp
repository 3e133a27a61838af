// Command-line front end: domain geometry, reference spectra, bound
// evaluation and bound-vs-spectrum verification reports.

#include "spectral_bounds/bounds.hpp"
#include "spectral_bounds/geometry.hpp"
#include "spectral_bounds/json_io.hpp"
#include "spectral_bounds/riesz.hpp"
#include "spectral_bounds/spectra.hpp"
#include "spectral_bounds/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitBadSpec = 2;
constexpr int kExitComputeFailure = 3;

std::string read_domain_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return arg;
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open domain spec file: " + arg);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<int> parse_k_range(const std::string& spec) {
    // "A:B[:step]" or a single integer.
    std::vector<int> out;
    if (spec.empty()) return out;
    int a = 0, b = 0, step = 1;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stoi(spec));
        return out;
    }
    a = std::stoi(spec.substr(0, c1));
    const auto rest = spec.substr(c1 + 1);
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) {
        b = std::stoi(rest);
    } else {
        b = std::stoi(rest.substr(0, c2));
        step = std::max(1, std::stoi(rest.substr(c2 + 1)));
    }
    for (int k = a; k <= b; k += step) out.push_back(k);
    return out;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

spb::spectra::Bc parse_bc(const std::string& s) {
    if (s == "dirichlet") return spb::spectra::Bc::dirichlet;
    if (s == "neumann") return spb::spectra::Bc::neumann;
    throw std::invalid_argument("--bc must be dirichlet or neumann");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical two-term eigenvalue bounds and their verification"};
    app.require_subcommand(1);

    std::string domain_arg, bc_arg = "dirichlet", out_path, format = "json";
    std::string theorems_arg = "all", k_range, w_list, z_list, t_list;
    int count = 32;
    std::uint64_t seed = 42;
    double fem_h = 0.1;
    int fem_refinements = 3;

    auto add_common = [&](CLI::App* sub, bool needs_domain = true) {
        if (needs_domain)
            sub->add_option("--domain", domain_arg, "domain spec (JSON file or inline)")
                ->required();
        sub->add_option("--bc", bc_arg, "boundary condition: dirichlet|neumann");
        sub->add_option("--out", out_path, "output path (default stdout)");
        sub->add_option("--format", format, "json|csv|tsv");
        sub->add_option("--seed", seed, "random seed for numeric fallbacks");
    };

    auto* c_geom = app.add_subcommand("geometry", "geometric summary of a domain");
    add_common(c_geom);

    auto* c_spec = app.add_subcommand("spectrum", "reference spectrum (analytic or FEM)");
    add_common(c_spec);
    c_spec->add_option("--count", count, "number of eigenvalues");
    c_spec->add_option("--fem-target-h", fem_h, "FEM coarse mesh size");
    c_spec->add_option("--fem-refinements", fem_refinements, "FEM levels (>= 2)");

    auto* c_riesz = app.add_subcommand("riesz", "spectral functionals of a spectrum");
    add_common(c_riesz);
    c_riesz->add_option("--count", count, "spectrum size");
    c_riesz->add_option("--z", z_list, "Riesz-mean evaluation points (comma separated)");
    c_riesz->add_option("--t", t_list, "heat-trace times (comma separated)");
    c_riesz->add_option("--w", w_list, "Legendre transform points (comma separated)");
    c_riesz->add_option("--k", k_range, "average range A:B[:step]");

    auto* c_bounds = app.add_subcommand("bounds", "evaluate bounds on a query grid");
    add_common(c_bounds);
    c_bounds->add_option("--count", count, "spectrum size");
    c_bounds->add_option("--theorems", theorems_arg, "comma separated ids or 'all'");
    c_bounds->add_option("--k", k_range, "k grid A:B[:step]");
    c_bounds->add_option("--z", z_list, "z grid (comma separated)");
    c_bounds->add_option("--t", t_list, "t grid (comma separated)");

    auto* c_verify = app.add_subcommand("verify", "verify bounds against a reference spectrum");
    add_common(c_verify);
    c_verify->add_option("--count", count, "spectrum size");
    c_verify->add_option("--theorems", theorems_arg, "comma separated ids or 'all'");
    c_verify->add_option("--k", k_range, "k grid A:B[:step]");
    c_verify->add_option("--z", z_list, "z grid (comma separated)");
    c_verify->add_option("--t", t_list, "t grid (comma separated)");
    c_verify->add_option("--fem-target-h", fem_h, "FEM coarse mesh size");
    c_verify->add_option("--fem-refinements", fem_refinements, "FEM levels (>= 2)");

    auto* c_report = app.add_subcommand("report", "human-readable summary plus plot TSV");
    add_common(c_report);
    c_report->add_option("--count", count, "spectrum size");
    c_report->add_option("--theorems", theorems_arg, "comma separated ids or 'all'");
    c_report->add_option("--k", k_range, "k grid A:B[:step]");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto bc = parse_bc(bc_arg);
        spb::geom::Domain domain = spb::geom::Box{2, {1.0, 1.0}};
        if (!domain_arg.empty()) {
            try {
                domain = spb::io::parse_domain(read_domain_arg(domain_arg));
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitBadSpec;
            }
        }

        if (c_geom->parsed()) {
            emit(spb::io::summary_to_json(spb::geom::summarize(domain)), out_path);
            return 0;
        }

        if (c_spec->parsed()) {
            spb::spectra::Spectrum s;
            if (std::holds_alternative<spb::geom::Polygon>(domain)) {
                spb::spectra::FemOptions fo;
                fo.target_h = fem_h;
                fo.refinements = fem_refinements;
                s = spb::spectra::fem_spectrum(std::get<spb::geom::Polygon>(domain), bc, count,
                                               fo);
            } else {
                s = spb::spectra::analytic_spectrum(domain, bc, count);
            }
            emit(spb::io::spectrum_to_json(s), out_path);
            return 0;
        }

        if (c_riesz->parsed()) {
            const auto s = spb::spectra::analytic_spectrum(domain, bc, count);
            std::ostringstream os;
            os << std::setprecision(17);
            os << "query\tpoint\tvalue\ttruncation_bound\n";
            for (const auto& z : split_csv(z_list)) {
                const auto r = spb::riesz::evaluate(s, spb::riesz::RieszMean{std::stod(z), 1.0});
                os << "riesz1\t" << z << '\t' << r.value << '\t' << r.truncation_bound << '\n';
            }
            for (int k : parse_k_range(k_range)) {
                const auto r = spb::riesz::evaluate(s, spb::riesz::Average{k});
                os << "average\t" << k << '\t' << r.value << "\t0\n";
            }
            for (const auto& t : split_csv(t_list)) {
                const auto r = spb::riesz::evaluate(s, spb::riesz::Partition{std::stod(t)});
                os << "partition\t" << t << '\t' << r.value << '\t' << r.truncation_bound << '\n';
            }
            for (const auto& w : split_csv(w_list)) {
                const auto r = spb::riesz::evaluate(s, spb::riesz::Legendre{std::stod(w)});
                os << "legendre\t" << w << '\t' << r.value << "\t0\n";
            }
            emit(os.str(), out_path);
            return 0;
        }

        // The remaining subcommands run the verification machinery.
        spb::verify::VerifyOptions opts;
        opts.spectrum_count = count;
        opts.seed = seed;
        spb::spectra::FemOptions fo;
        fo.target_h = fem_h;
        fo.refinements = fem_refinements;
        opts.fem_opts = fo;

        const auto summary = spb::geom::summarize(domain);
        auto grid = spb::verify::default_grid(summary, count);
        if (!k_range.empty()) grid.ks = parse_k_range(k_range);
        if (!z_list.empty()) {
            grid.zs.clear();
            for (const auto& z : split_csv(z_list)) grid.zs.push_back(std::stod(z));
        }
        if (!t_list.empty()) {
            grid.ts.clear();
            for (const auto& t : split_csv(t_list)) grid.ts.push_back(std::stod(t));
        }
        auto ids = theorems_arg == "all" ? spb::verify::all_theorem_ids(bc)
                                         : split_csv(theorems_arg);

        const auto rep = spb::verify::verify_domain(domain, bc, ids, grid, opts);

        if (c_report->parsed()) {
            std::ostringstream os;
            os << std::setprecision(17);
            os << "domain: " << rep.domain_desc << "  bc: " << rep.bc
               << "  spectrum: " << rep.spectrum_source << '\n';
            os << "records: " << rep.summary.total << "  passed: " << rep.summary.passed
               << "  failed: " << rep.summary.failed
               << "  inconclusive: " << rep.summary.inconclusive
               << "  inapplicable: " << rep.summary.inapplicable << '\n';
            os << "worst margin: " << rep.summary.worst_margin << '\n';
            for (const auto& f : rep.fits)
                os << "fit " << f.theorem_id << ": estimate " << f.estimate << " vs "
                   << f.prediction << " (deviation " << f.deviation << ")\n";
            os << '\n' << spb::io::report_to_tsv(rep);
            emit(os.str(), out_path);
        } else {
            std::string text = format == "csv"   ? spb::io::report_to_csv(rep)
                               : format == "tsv" ? spb::io::report_to_tsv(rep)
                                                 : spb::io::report_to_json(rep);
            emit(text, out_path);
        }
        if (c_verify->parsed() && rep.summary.failed > 0) return kExitVerifyFailure;
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputeFailure;
    }
}
