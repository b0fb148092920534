#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrs/fockoracle.hpp"
#include "qrs/rabi_eps.hpp"
#include "qrs/rabi_nl.hpp"

namespace {

struct Range {
    bool is_range = false;
    double value = 0.0;           // scalar form
    double lo = 0.0, hi = 0.0;    // range form
    double step = 0.0;            // 0 when the triplet had no step
};

Range parse_range(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty() || parts.size() > 3)
        throw CLI::ValidationError("range", "expected value, start:end, or start:end:step");
    Range r;
    try {
        if (parts.size() == 1) {
            r.value = std::stod(parts[0]);
            return r;
        }
        r.is_range = true;
        r.lo = std::stod(parts[0]);
        r.hi = std::stod(parts[1]);
        if (parts.size() == 3) r.step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "malformed number in '" + s + "'");
    }
    if (r.hi < r.lo) throw CLI::ValidationError("range", "end before start in '" + s + "'");
    if (parts.size() == 3 && !(r.step > 0.0))
        throw CLI::ValidationError("range", "step must be positive in '" + s + "'");
    return r;
}

std::vector<double> grid_of(const Range& r) {
    if (!r.is_range) return {r.value};
    if (r.step <= 0.0) throw CLI::ValidationError("range", "sweep range needs a step");
    std::vector<double> g;
    for (double v = r.lo; v <= r.hi + 0.5 * r.step; v += r.step) g.push_back(v);
    return g;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string kind_name(qrs::SpectrumKind k) {
    switch (k) {
        case qrs::SpectrumKind::Generic: return "generic";
        case qrs::SpectrumKind::JuddianEntire: return "juddian-entire";
        case qrs::SpectrumKind::DegenerateSingle: return "degenerate-single";
        case qrs::SpectrumKind::DoublyDegenerate: return "doubly-degenerate";
    }
    return "unknown";
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw CLI::ValidationError("--out", "cannot open '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct CommonOpts {
    std::string model = "rabi-eps";
    std::string out = "-";
    double scan_step = 0.005;
    double refine_tol = 1e-10;
    int ntrunc = 0;  // 0: model default
    // model 1
    std::string lambda = "0.5", mu = "0", eps = "0", x;
    // model 2
    std::string omega = "1", omega0 = "0", bigu = "0", g = "0.1", e;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_window) {
    cmd->add_option("--model", o.model)->check(CLI::IsMember({"rabi-eps", "rabi-nl"}));
    cmd->add_option("--out", o.out);
    cmd->add_option("--scan-step", o.scan_step)->check(CLI::PositiveNumber);
    cmd->add_option("--refine-tol", o.refine_tol)->check(CLI::PositiveNumber);
    cmd->add_option("--ntrunc", o.ntrunc);
    cmd->add_option("--lambda", o.lambda);
    cmd->add_option("--mu", o.mu);
    cmd->add_option("--eps", o.eps);
    cmd->add_option("--omega", o.omega);
    cmd->add_option("--omega0", o.omega0);
    cmd->add_option("--bigu", o.bigu);
    cmd->add_option("--g", o.g);
    auto* x_opt = cmd->add_option("--x", o.x);
    auto* e_opt = cmd->add_option("--e", o.e);
    if (needs_window) {
        (void)x_opt;
        (void)e_opt;
    }
}

int cmd_spectrum(const CommonOpts& o) {
    Output out(o.out);
    std::ostream& os = out.stream();
    int failures = 0;

    if (o.model == "rabi-eps") {
        if (o.x.empty()) throw CLI::ValidationError("--x", "spectrum needs an x window");
        Range xr = parse_range(o.x);
        if (!xr.is_range) throw CLI::ValidationError("--x", "expected start:end");
        Range lam = parse_range(o.lambda), mu = parse_range(o.mu), ep = parse_range(o.eps);
        int ranges = (lam.is_range ? 1 : 0) + (mu.is_range ? 1 : 0) + (ep.is_range ? 1 : 0);
        if (ranges > 1)
            throw CLI::ValidationError("sweep", "at most one of lambda/mu/eps may be a range");
        std::string name = lam.is_range ? "lambda" : (mu.is_range ? "mu" : (ep.is_range ? "eps" : "lambda"));
        const Range& sw = lam.is_range ? lam : (mu.is_range ? mu : (ep.is_range ? ep : lam));
        os << "sweep_param,sweep_value,x,E,kind,multiplicity,parity\n";
        for (double v : grid_of(sw)) {
            qrs::Model1Params base;
            base.lambda = (name == "lambda") ? v : lam.value;
            base.mu = (name == "mu") ? v : mu.value;
            base.eps = (name == "eps") ? v : ep.value;
            try {
                qrs::SpectrumSet set = qrs::spectrum_model1(base, xr.lo, xr.hi,
                                                            o.scan_step, o.refine_tol);
                for (const qrs::SpectrumPoint& pt : set.points) {
                    os << name << ',' << num(v) << ',' << num(pt.x_value) << ','
                       << num(pt.energy) << ',' << kind_name(pt.kind) << ','
                       << pt.multiplicity << ','
                       << (pt.parity ? std::to_string(*pt.parity) : std::string()) << '\n';
                }
            } catch (const std::exception& ex) {
                std::cerr << "spectrum: " << name << " = " << v << ": " << ex.what() << '\n';
                ++failures;
            }
        }
        return failures ? 2 : 0;
    }

    if (o.e.empty()) throw CLI::ValidationError("--e", "spectrum needs an E window");
    Range er = parse_range(o.e);
    if (!er.is_range) throw CLI::ValidationError("--e", "expected start:end");
    Range om = parse_range(o.omega), om0 = parse_range(o.omega0);
    Range bu = parse_range(o.bigu), gg = parse_range(o.g);
    int ranges = (om.is_range ? 1 : 0) + (om0.is_range ? 1 : 0) + (bu.is_range ? 1 : 0) +
                 (gg.is_range ? 1 : 0);
    if (ranges > 1)
        throw CLI::ValidationError("sweep", "at most one of omega/omega0/bigu/g may be a range");
    std::string name = om.is_range ? "omega"
                                   : (om0.is_range ? "omega0" : (bu.is_range ? "bigu" : "g"));
    const Range& sw = om.is_range ? om : (om0.is_range ? om0 : (bu.is_range ? bu : gg));
    os << "sweep_param,sweep_value,x,E,kind,multiplicity,parity\n";
    for (double v : grid_of(sw)) {
        qrs::Model2Params base;
        base.omega = (name == "omega") ? v : om.value;
        base.omega0 = (name == "omega0") ? v : om0.value;
        base.U = (name == "bigu") ? v : bu.value;
        base.g = (name == "g") ? v : gg.value;
        try {
            qrs::Model2SpectrumResult res =
                qrs::spectrum_model2(base, er.lo, er.hi, o.scan_step, o.refine_tol);
            for (const qrs::SpectrumPoint& pt : res.set.points) {
                os << name << ',' << num(v) << ',' << num(pt.x_value) << ','
                   << num(pt.energy) << ',' << kind_name(pt.kind) << ','
                   << pt.multiplicity << ','
                   << (pt.parity ? std::to_string(*pt.parity) : std::string()) << '\n';
            }
        } catch (const std::exception& ex) {
            std::cerr << "spectrum: " << name << " = " << v << ": " << ex.what() << '\n';
            ++failures;
        }
    }
    return failures ? 2 : 0;
}

int cmd_wtrace(const CommonOpts& o) {
    Output out(o.out);
    std::ostream& os = out.stream();
    if (o.model == "rabi-eps") {
        if (o.x.empty()) throw CLI::ValidationError("--x", "wtrace needs an x grid");
        Range xr = parse_range(o.x);
        if (!xr.is_range || xr.step <= 0.0)
            throw CLI::ValidationError("--x", "expected start:end:step");
        qrs::Model1Params p;
        p.lambda = parse_range(o.lambda).value;
        p.mu = parse_range(o.mu).value;
        p.eps = parse_range(o.eps).value;
        os << "x,W\n";
        for (double x : grid_of(xr)) {
            p.x = x;
            double w;
            try {
                w = qrs::wronskian_W(p);
            } catch (const std::exception&) {
                w = std::numeric_limits<double>::quiet_NaN();
            }
            os << num(x) << ',' << (std::isfinite(w) ? num(w) : "nan") << '\n';
        }
        return 0;
    }
    if (o.e.empty()) throw CLI::ValidationError("--e", "wtrace needs an E grid");
    Range er = parse_range(o.e);
    if (!er.is_range || er.step <= 0.0)
        throw CLI::ValidationError("--e", "expected start:end:step");
    qrs::Model2Params p;
    p.omega = parse_range(o.omega).value;
    p.omega0 = parse_range(o.omega0).value;
    p.U = parse_range(o.bigu).value;
    p.g = parse_range(o.g).value;
    os << "E,W\n";
    for (double E : grid_of(er)) {
        p.E = E;
        double w;
        try {
            w = qrs::wronskian_model2(p);
        } catch (const std::exception&) {
            w = std::numeric_limits<double>::quiet_NaN();
        }
        os << num(E) << ',' << (std::isfinite(w) ? num(w) : "nan") << '\n';
    }
    return 0;
}

int cmd_oracle(const CommonOpts& o) {
    Output out(o.out);
    std::ostream& os = out.stream();
    std::vector<double> oracle, method;

    if (o.model == "rabi-eps") {
        if (o.x.empty()) throw CLI::ValidationError("--x", "oracle needs an x window");
        Range xr = parse_range(o.x);
        if (!xr.is_range) throw CLI::ValidationError("--x", "expected start:end");
        qrs::Model1Params base;
        base.lambda = parse_range(o.lambda).value;
        base.mu = parse_range(o.mu).value;
        base.eps = parse_range(o.eps).value;
        double l2 = base.lambda * base.lambda;
        qrs::RabiEpsParams op{base.lambda, base.mu, base.eps};
        int n = o.ntrunc > 0 ? o.ntrunc : 120;
        qrs::FockOperator H = qrs::build_hamiltonian(op, n);
        for (double ev : qrs::eigenvalues(H, 2 * n))
            if (ev + l2 >= xr.lo && ev + l2 <= xr.hi) oracle.push_back(ev);
        if (base.lambda > 0.0) {
            qrs::SpectrumSet set =
                qrs::spectrum_model1(base, xr.lo, xr.hi, o.scan_step, o.refine_tol);
            for (const qrs::SpectrumPoint& pt : set.points)
                for (int m = 0; m < pt.multiplicity; ++m) method.push_back(pt.energy);
        } else {
            // lambda = 0: decoupled closed form E = k +- sqrt(mu^2 + eps^2)
            double r = std::sqrt(base.mu * base.mu + base.eps * base.eps);
            for (int k = 0; k < n; ++k)
                for (double s : {-r, r}) {
                    double E = k + s;
                    if (E >= xr.lo && E <= xr.hi) method.push_back(E);
                }
            std::sort(method.begin(), method.end());
        }
    } else {
        if (o.e.empty()) throw CLI::ValidationError("--e", "oracle needs an E window");
        Range er = parse_range(o.e);
        if (!er.is_range) throw CLI::ValidationError("--e", "expected start:end");
        qrs::Model2Params base;
        base.omega = parse_range(o.omega).value;
        base.omega0 = parse_range(o.omega0).value;
        base.U = parse_range(o.bigu).value;
        base.g = parse_range(o.g).value;
        qrs::NonlinearUParams op{base.omega, base.omega0, base.g, base.U};
        int n = o.ntrunc > 0 ? o.ntrunc : 160;
        qrs::FockOperator H = qrs::build_hamiltonian(op, n);
        for (double ev : qrs::eigenvalues(H, 2 * n))
            if (ev >= er.lo && ev <= er.hi) oracle.push_back(ev);
        qrs::Model2SpectrumResult res =
            qrs::spectrum_model2(base, er.lo, er.hi, o.scan_step, o.refine_tol);
        for (const qrs::SpectrumPoint& pt : res.set.points)
            for (int m = 0; m < pt.multiplicity; ++m) method.push_back(pt.energy);
    }

    // nearest matching between the two sorted lists
    os << "index,E_oracle,E_method,abs_diff\n";
    std::vector<bool> used(method.size(), false);
    int index = 0, unmatched = 0;
    const double match_window = 0.05;
    for (double ev : oracle) {
        int best = -1;
        double bestd = match_window;
        for (size_t j = 0; j < method.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(method[j] - ev);
            if (d < bestd) {
                bestd = d;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            used[static_cast<size_t>(best)] = true;
            os << index++ << ',' << num(ev) << ',' << num(method[static_cast<size_t>(best)])
               << ',' << num(bestd) << '\n';
        } else {
            os << index++ << ',' << num(ev) << ",,\n";
            ++unmatched;
        }
    }
    for (size_t j = 0; j < method.size(); ++j) {
        if (used[j]) continue;
        os << index++ << ",," << num(method[j]) << ",\n";
        ++unmatched;
    }
    if (unmatched) {
        std::cerr << "oracle: " << unmatched << " unmatched level(s)\n";
        return 2;
    }
    return 0;
}

struct JuddOpts {
    int m = 1;
    double omega = 2.0, bigu = 0.0;
    std::string omega0 = "-2:2", g = "0:1.5";
    int grid = 61;
    std::string out = "-";
};

int cmd_judd(const JuddOpts& jo) {
    Output out(jo.out);
    std::ostream& os = out.stream();
    Range om0 = parse_range(jo.omega0), gr = parse_range(jo.g);
    if (!om0.is_range || !gr.is_range)
        throw CLI::ValidationError("--omega0/--g", "expected start:end windows");
    std::vector<qrs::JuddCurvePoint> pts =
        qrs::judd_curves(jo.m, jo.omega, jo.bigu, om0.lo, om0.hi, gr.lo, gr.hi,
                         jo.grid, jo.grid);
    os << "m,omega0,g,branch\n";
    for (const qrs::JuddCurvePoint& p : pts)
        os << jo.m << ',' << num(p.omega0) << ',' << num(p.g) << ',' << p.branch << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact spectra of two generalized quantum Rabi models"};
    app.require_subcommand(1);

    CommonOpts so, wo, oo;
    JuddOpts jo;
    CLI::App* spectrum = app.add_subcommand("spectrum", "spectrum sweep table");
    add_common(spectrum, so, true);
    CLI::App* wtrace = app.add_subcommand("wtrace", "Wronskian trace table");
    add_common(wtrace, wo, true);
    CLI::App* oracle = app.add_subcommand("oracle", "method vs. truncated-basis oracle");
    add_common(oracle, oo, true);
    CLI::App* judd = app.add_subcommand("judd", "Juddian curves in the (omega0, g) plane");
    judd->add_option("--m", jo.m)->check(CLI::PositiveNumber);
    judd->add_option("--omega", jo.omega);
    judd->add_option("--bigu", jo.bigu);
    judd->add_option("--omega0", jo.omega0);
    judd->add_option("--g", jo.g);
    judd->add_option("--grid", jo.grid)->check(CLI::PositiveNumber);
    judd->add_option("--out", jo.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(so);
        if (wtrace->parsed()) return cmd_wtrace(wo);
        if (oracle->parsed()) return cmd_oracle(oo);
        if (judd->parsed()) return cmd_judd(jo);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 1;
}
