#include "slp/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace slp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawConfig {
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries;

    std::optional<Entry> take(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        Entry e = it->second;
        entries.erase(it);
        return e;
    }
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(lineno, "", "expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(lineno, "", "empty key");
        if (raw.entries.count(key)) throw ConfigError(lineno, key, "duplicate key");
        raw.entries[key] = {value, lineno};
    }
    return raw;
}

double parse_double(const RawConfig::Entry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(e.line, key, "not a number: '" + e.value + "'");
    }
}

int parse_int(const RawConfig::Entry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return static_cast<int>(v);
    } catch (...) {
        throw ConfigError(e.line, key, "not an integer: '" + e.value + "'");
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<double> parse_tuple(const std::string& tok, std::size_t arity, int line,
                                const std::string& key) {
    std::vector<double> vals;
    std::stringstream ss(tok);
    std::string part;
    while (std::getline(ss, part, ':')) {
        try {
            std::size_t pos = 0;
            vals.push_back(std::stod(part, &pos));
            if (pos != part.size()) throw std::invalid_argument("");
        } catch (...) {
            throw ConfigError(line, key, "bad entry '" + tok + "'");
        }
    }
    if (vals.size() != arity) {
        throw ConfigError(line, key,
                          "entry '" + tok + "' needs " + std::to_string(arity) + " fields");
    }
    return vals;
}

CoefficientConfig parse_coefficient(RawConfig& raw, const std::string& prefix,
                                    CoefficientConfig base) {
    CoefficientConfig cc = std::move(base);
    if (auto e = raw.take(prefix + ".primitive")) {
        cc.primitive.clear();
        for (const std::string& tok : split_ws(e->value)) {
            auto v = parse_tuple(tok, 2, e->line, prefix + ".primitive");
            cc.primitive.push_back({v[0], v[1]});
        }
        if (cc.primitive.empty()) {
            throw ConfigError(e->line, prefix + ".primitive", "no breakpoints given");
        }
        if (cc.primitive.front() != std::pair<double, double>(0.0, 0.0)) {
            throw ConfigError(e->line, prefix + ".primitive",
                              "breakpoints must start at 0:0");
        }
        if (cc.primitive.back().first != 1.0) {
            throw ConfigError(e->line, prefix + ".primitive",
                              "breakpoints must end at x = 1");
        }
        for (std::size_t i = 1; i < cc.primitive.size(); ++i) {
            if (!(cc.primitive[i].first > cc.primitive[i - 1].first)) {
                throw ConfigError(e->line, prefix + ".primitive",
                                  "breakpoints must be strictly increasing in x");
            }
        }
    }
    if (auto e = raw.take(prefix + ".atoms")) {
        cc.atoms.clear();
        for (const std::string& tok : split_ws(e->value)) {
            auto v = parse_tuple(tok, 2, e->line, prefix + ".atoms");
            if (v[0] < 0.0 || v[0] > 1.0) {
                throw ConfigError(e->line, prefix + ".atoms", "atom outside [0,1]");
            }
            cc.atoms.push_back({v[0], v[1]});
        }
    }
    return cc;
}

std::complex<double> unitary_from_angle(double multiple_of_pi) {
    double m = std::fmod(multiple_of_pi, 2.0);
    if (m < 0.0) m += 2.0;
    if (m == 0.0) return {1.0, 0.0};
    if (m == 1.0) return {-1.0, 0.0};
    if (m == 0.5) return {0.0, 1.0};
    if (m == 1.5) return {0.0, -1.0};
    double a = m * 3.14159265358979323846;
    return {std::cos(a), std::sin(a)};
}

}  // namespace

ProblemConfig parse_config_text(const std::string& text) {
    RawConfig raw = tokenize(text);
    ProblemConfig cfg;

    if (auto e = raw.take("mesh.cells")) {
        cfg.mesh_cells = parse_int(*e, "mesh.cells");
        if (cfg.mesh_cells < 1) throw ConfigError(e->line, "mesh.cells", "must be >= 1");
    }
    if (auto e = raw.take("p.default")) {
        cfg.p_default = parse_double(*e, "p.default");
        if (!(cfg.p_default > 0.0)) throw ConfigError(e->line, "p.default", "must be > 0");
    }
    if (auto e = raw.take("p.pieces")) {
        for (const std::string& tok : split_ws(e->value)) {
            auto v = parse_tuple(tok, 3, e->line, "p.pieces");
            if (!(v[0] < v[1])) {
                throw ConfigError(e->line, "p.pieces", "piece must have from < to");
            }
            if (v[0] < 0.0 || v[1] > 1.0) {
                throw ConfigError(e->line, "p.pieces", "piece outside [0,1]");
            }
            if (!(v[2] > 0.0)) {
                throw ConfigError(e->line, "p.pieces", "p must be uniformly positive");
            }
            cfg.p_pieces.push_back({v[0], v[1], v[2]});
        }
    }

    cfg.q = parse_coefficient(raw, "q", CoefficientConfig{});
    cfg.r = parse_coefficient(raw, "r", cfg.r);  // default density is Lebesgue

    if (auto e = raw.take("bc.kind")) {
        const std::string& v = e->value;
        if (v == "dirichlet_dirichlet") cfg.bc_kind = BcKind::DirichletDirichlet;
        else if (v == "neumann_dirichlet") cfg.bc_kind = BcKind::NeumannDirichlet;
        else if (v == "dirichlet_neumann") cfg.bc_kind = BcKind::DirichletNeumann;
        else if (v == "neumann_neumann") cfg.bc_kind = BcKind::NeumannNeumann;
        else if (v == "robin_right") cfg.bc_kind = BcKind::RobinRight;
        else throw ConfigError(e->line, "bc.kind", "unknown kind '" + v + "'");
    }
    if (auto e = raw.take("bc.robin_c")) {
        cfg.robin_c = parse_double(*e, "bc.robin_c");
        if (!(cfg.robin_c > 0.0)) throw ConfigError(e->line, "bc.robin_c", "must be > 0");
    }
    if (auto e = raw.take("bc.u_angles")) {
        auto toks = split_ws(e->value);
        if (toks.size() != 2) {
            throw ConfigError(e->line, "bc.u_angles", "expected two angles (multiples of pi)");
        }
        RawConfig::Entry a{toks[0], e->line}, b{toks[1], e->line};
        cfg.u_angles = {parse_double(a, "bc.u_angles"), parse_double(b, "bc.u_angles")};
        if (cfg.bc_kind) {
            throw ConfigError(e->line, "bc.u_angles", "give either bc.kind or bc.u_angles");
        }
    }
    if (!cfg.bc_kind && !cfg.u_angles) cfg.bc_kind = BcKind::DirichletDirichlet;
    if (cfg.bc_kind && *cfg.bc_kind == BcKind::RobinRight && !(cfg.robin_c > 0.0)) {
        throw ConfigError(0, "bc.robin_c", "robin_right requires bc.robin_c > 0");
    }

    if (auto e = raw.take("solver.count")) {
        cfg.solver_count = parse_int(*e, "solver.count");
        if (cfg.solver_count < 1) throw ConfigError(e->line, "solver.count", "must be >= 1");
    }
    if (auto e = raw.take("solver.tol")) {
        cfg.solver_tol = parse_double(*e, "solver.tol");
        if (!(cfg.solver_tol > 0.0)) throw ConfigError(e->line, "solver.tol", "must be > 0");
    }
    if (auto e = raw.take("analysis.eps_grid")) {
        cfg.eps_scales.clear();
        for (const std::string& tok : split_ws(e->value)) {
            RawConfig::Entry t{tok, e->line};
            double s = parse_double(t, "analysis.eps_grid");
            if (!(s > 0.0)) throw ConfigError(e->line, "analysis.eps_grid", "scales must be > 0");
            cfg.eps_scales.push_back(s);
        }
        if (cfg.eps_scales.empty()) {
            throw ConfigError(e->line, "analysis.eps_grid", "empty grid");
        }
    }
    if (auto e = raw.take("analysis.ztol")) {
        cfg.ztol = parse_double(*e, "analysis.ztol");
        if (!(cfg.ztol > 0.0)) throw ConfigError(e->line, "analysis.ztol", "must be > 0");
    }
    if (auto e = raw.take("analysis.trials")) {
        cfg.trials = parse_int(*e, "analysis.trials");
        if (cfg.trials < 1) throw ConfigError(e->line, "analysis.trials", "must be >= 1");
    }
    if (auto e = raw.take("analysis.seed")) {
        long long s = parse_int(*e, "analysis.seed");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (auto e = raw.take("analysis.chebyshev_max")) {
        cfg.chebyshev_max = parse_int(*e, "analysis.chebyshev_max");
        if (cfg.chebyshev_max < 1) {
            throw ConfigError(e->line, "analysis.chebyshev_max", "must be >= 1");
        }
    }
    if (auto e = raw.take("analysis.invariance_tol")) {
        cfg.invariance_tol = parse_double(*e, "analysis.invariance_tol");
        if (!(cfg.invariance_tol > 0.0)) {
            throw ConfigError(e->line, "analysis.invariance_tol", "must be > 0");
        }
    }

    if (!raw.entries.empty()) {
        const auto& [key, entry] = *raw.entries.begin();
        throw ConfigError(entry.line, key, "unknown key");
    }
    return cfg;
}

ProblemConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Problem build_problem(const ProblemConfig& cfg) {
    std::vector<double> required;
    for (const auto& piece : cfg.p_pieces) {
        required.push_back(piece[0]);
        required.push_back(piece[1]);
    }
    for (const auto* cc : {&cfg.q, &cfg.r}) {
        for (const auto& bp : cc->primitive) required.push_back(bp.first);
        for (const Atom& a : cc->atoms) required.push_back(a.location);
    }
    Mesh mesh = build_mesh(cfg.mesh_cells, required);

    std::vector<double> pv(mesh.cell_count(), cfg.p_default);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double mid = 0.5 * (mesh.node(c) + mesh.node(c + 1));
        for (const auto& piece : cfg.p_pieces) {
            if (mid >= piece[0] && mid < piece[1]) {
                pv[c] = piece[2];
                break;
            }
        }
    }

    auto realize = [&](const CoefficientConfig& cc) {
        std::vector<double> w(mesh.node_count(), 0.0);
        if (!cc.primitive.empty()) {
            std::size_t seg = 0;
            for (std::size_t i = 0; i < mesh.node_count(); ++i) {
                double x = mesh.node(i);
                while (seg + 2 < cc.primitive.size() && cc.primitive[seg + 1].first <= x) ++seg;
                auto [x0, w0] = cc.primitive[seg];
                auto [x1, w1] = cc.primitive[seg + 1];
                double t = (x - x0) / (x1 - x0);
                w[i] = (x == x0) ? w0 : (x == x1 ? w1 : w0 + t * (w1 - w0));
            }
            w[0] = 0.0;
        }
        std::vector<Atom> atoms;
        for (const Atom& a : cc.atoms) {
            auto idx = mesh.find_node(a.location);
            if (!idx) throw std::logic_error("atom node missing after mesh build");
            bool merged = false;
            for (Atom& b : atoms) {
                if (b.location == mesh.node(*idx)) {
                    b.mass += a.mass;
                    merged = true;
                    break;
                }
            }
            if (!merged) atoms.push_back({mesh.node(*idx), a.mass});
        }
        return GeneralizedFunction(PiecewiseLinear(mesh, std::move(w)), std::move(atoms));
    };

    GeneralizedFunction q = realize(cfg.q);
    GeneralizedFunction r = realize(cfg.r);
    if (!r.is_nonnegative_measure()) {
        throw ConfigError(0, "r", "weight must be a nonnegative measure");
    }

    BoundarySpec bc = BoundarySpec::canonical(BcKind::DirichletDirichlet);
    if (cfg.u_angles) {
        auto [spec, extra] = canonicalize_bc(unitary_from_angle(cfg.u_angles->first),
                                             unitary_from_angle(cfg.u_angles->second));
        bc = spec;
        if (!extra.empty()) {
            std::vector<Atom> atoms = q.atoms();
            for (const Atom& a : extra) {
                bool merged = false;
                for (Atom& b : atoms) {
                    if (b.location == a.location) {
                        b.mass += a.mass;
                        merged = true;
                        break;
                    }
                }
                if (!merged) atoms.push_back(a);
            }
            q = GeneralizedFunction(q.primitive(), std::move(atoms));
        }
    } else {
        bc = BoundarySpec::canonical(*cfg.bc_kind,
                                     *cfg.bc_kind == BcKind::RobinRight ? cfg.robin_c : 0.0);
    }

    return Problem{mesh, PiecewiseConstant(mesh, std::move(pv)), std::move(q), std::move(r),
                   bc};
}

}  // namespace slp
