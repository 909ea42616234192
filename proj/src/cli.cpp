#include "aubry/cli.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "aubry/barrier.hpp"
#include "aubry/errors.hpp"
#include "aubry/experiments.hpp"
#include "aubry/orbits.hpp"

namespace aubry {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw UsageError(what + ": expected a finite real, got '" + s + "'");
    return v;
}

long to_long(const std::string& s, const std::string& what) {
    long v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw UsageError(what + ": expected an integer, got '" + s + "'");
    return v;
}

int to_int(const std::string& s, const std::string& what) {
    const long v = to_long(s, what);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw UsageError(what + ": out of range");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

// Field table shared by the INI reader/writer and the flag binder.
struct Field {
    const char* section;
    const char* key;
    const char* flag;
    Setter set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        auto real = [](double RunConfig::*m, const char* flag) {
            return Setter([m, flag](RunConfig& c, const std::string& s) { c.*m = to_double(s, flag); });
        };
        auto integer = [](auto RunConfig::*m, const char* flag) {
            return Setter([m, flag](RunConfig& c, const std::string& s) {
                c.*m = static_cast<std::remove_reference_t<decltype(c.*m)>>(to_long(s, flag));
            });
        };
        auto text = [](std::string RunConfig::*m) {
            return Setter([m](RunConfig& c, const std::string& s) { c.*m = s; });
        };
        auto show_real = [](double RunConfig::*m) {
            return [m](const RunConfig& c) { return std::optional<std::string>(format_double(c.*m)); };
        };
        auto show_int = [](auto RunConfig::*m) {
            return [m](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.*m)); };
        };
        auto show_text = [](std::string RunConfig::*m) {
            return [m](const RunConfig& c) { return std::optional<std::string>(c.*m); };
        };
        auto show_opt = [](auto RunConfig::*m) {
            return [m](const RunConfig& c) {
                return (c.*m) ? std::optional<std::string>(std::to_string(*(c.*m))) : std::nullopt;
            };
        };

        f.push_back({"map", "family", "--map",
                     [](RunConfig& c, const std::string& s) {
                         try {
                             c.family = parse_family(s);
                         } catch (const std::invalid_argument&) {
                             throw UsageError("--map: expected std or two-harmonic, got '" + s + "'");
                         }
                     },
                     [](const RunConfig& c) { return std::optional<std::string>(family_name(c.family)); }});
        f.push_back({"map", "k", "--k", real(&RunConfig::k, "--k"), show_real(&RunConfig::k)});
        f.push_back({"map", "k2", "--k2", real(&RunConfig::k2, "--k2"), show_real(&RunConfig::k2)});
        f.push_back({"grid", "n_grid", "--n-grid",
                     [](RunConfig& c, const std::string& s) { c.n_grid = to_int(s, "--n-grid"); },
                     show_opt(&RunConfig::n_grid)});
        f.push_back({"grid", "band_margin", "--band-margin",
                     [](RunConfig& c, const std::string& s) { c.band_margin = to_int(s, "--band-margin"); },
                     show_opt(&RunConfig::band_margin)});
        f.push_back({"grid", "max_grid", "--max-grid", integer(&RunConfig::max_grid, "--max-grid"),
                     show_int(&RunConfig::max_grid)});
        f.push_back({"grid", "max_steps", "--max-steps", integer(&RunConfig::max_steps, "--max-steps"),
                     show_int(&RunConfig::max_steps)});
        f.push_back({"run", "symbol", "--symbol", text(&RunConfig::symbol), show_text(&RunConfig::symbol)});
        f.push_back({"run", "budget", "--budget", real(&RunConfig::budget, "--budget"),
                     show_real(&RunConfig::budget)});
        f.push_back({"run", "m", "--m", [](RunConfig& c, const std::string& s) { c.m = to_long(s, "--m"); },
                     show_opt(&RunConfig::m)});
        f.push_back({"run", "n_dirichlet", "--n-dirichlet",
                     [](RunConfig& c, const std::string& s) { c.n_dirichlet = to_long(s, "--n-dirichlet"); },
                     show_opt(&RunConfig::n_dirichlet)});
        f.push_back({"run", "out", "--out", text(&RunConfig::out), show_text(&RunConfig::out)});
        f.push_back({"run", "format", "--format", text(&RunConfig::format), show_text(&RunConfig::format)});
        f.push_back({"run", "k_min", "--k-min", real(&RunConfig::k_min, "--k-min"), show_real(&RunConfig::k_min)});
        f.push_back({"run", "k_max", "--k-max", real(&RunConfig::k_max, "--k-max"), show_real(&RunConfig::k_max)});
        f.push_back({"run", "steps", "--steps", integer(&RunConfig::steps, "--steps"), show_int(&RunConfig::steps)});
        f.push_back({"run", "refine", "--refine", integer(&RunConfig::refine, "--refine"),
                     show_int(&RunConfig::refine)});
        f.push_back({"run", "deltas", "--deltas", text(&RunConfig::deltas), show_text(&RunConfig::deltas)});
        f.push_back({"run", "p", "--p", integer(&RunConfig::p, "--p"), show_int(&RunConfig::p)});
        f.push_back({"run", "q", "--q", integer(&RunConfig::q, "--q"), show_int(&RunConfig::q)});
        f.push_back({"run", "k_prime", "--k-prime",
                     [](RunConfig& c, const std::string& s) { c.k_prime = to_double(s, "--k-prime"); },
                     [](const RunConfig& c) {
                         return c.k_prime ? std::optional<std::string>(format_double(*c.k_prime)) : std::nullopt;
                     }});
        f.push_back({"run", "cases", "--cases", text(&RunConfig::cases), show_text(&RunConfig::cases)});
        return f;
    }();
    return table;
}

const Field& field_for_flag(const std::string& flag) {
    for (const Field& f : fields())
        if (flag == f.flag) return f;
    throw std::logic_error("unknown flag " + flag);
}

std::string csv_trailer(const RunConfig& cfg, const std::string& command) {
    std::string out = "# schema=aubry-barrier.v1\n# command=" + command + "\n";
    std::istringstream in(format_config(cfg));
    std::string line;
    while (std::getline(in, line)) out += "# " + line + "\n";
    return out;
}

void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
    if (cfg.out.empty()) {
        out << body;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
    file << body;
}

FamilySpec family_of(const RunConfig& cfg) {
    if (!(cfg.k >= 0.0) || !(cfg.k2 >= 0.0)) throw UsageError("--k: kick strengths must be >= 0");
    return FamilySpec{cfg.family, cfg.k, cfg.family == FamilyKind::standard ? 0.0 : cfg.k2};
}

RotationSymbol symbol_of(const RunConfig& cfg) {
    try {
        return parse_symbol(cfg.symbol);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--symbol: ") + e.what());
    }
}

BarrierRequest request_of(const RunConfig& cfg) {
    if (!(cfg.budget > 0.0)) throw UsageError("--budget: must be positive");
    if (cfg.n_grid && *cfg.n_grid < 8) throw UsageError("--n-grid: must be >= 8");
    if (cfg.m && *cfg.m < 2) throw UsageError("--m: must be >= 2");
    if (cfg.n_dirichlet && *cfg.n_dirichlet < 2) throw UsageError("--n-dirichlet: must be >= 2");
    if (cfg.band_margin && *cfg.band_margin < 1) throw UsageError("--band-margin: must be >= 1");
    BarrierRequest req;
    req.budget = cfg.budget;
    req.n_grid = cfg.n_grid;
    req.m = cfg.m;
    req.n_dirichlet = cfg.n_dirichlet;
    req.margin = cfg.band_margin;
    req.caps.max_grid = cfg.max_grid;
    req.caps.max_steps = cfg.max_steps;
    return req;
}

int run_barrier(const RunConfig& cfg, std::ostream& out) {
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format: expected csv or json");
    const BarrierProfile prof = compute_barrier(family_of(cfg), symbol_of(cfg), request_of(cfg));
    std::string body;
    if (cfg.format == "csv") {
        body = "xi,value,err_omega,err_m,err_grid,err_total\n";
        for (std::size_t a = 0; a < prof.values.size(); ++a) {
            body += format_double(prof.xi[a]) + "," + format_double(prof.values[a]) + "," +
                    format_double(prof.err_omega) + "," + format_double(prof.err_m) + "," +
                    format_double(prof.err_grid) + "," + format_double(prof.err_total) + "\n";
        }
        body += csv_trailer(cfg, "barrier");
    } else {
        nlohmann::ordered_json j;
        j["schema"] = "aubry-barrier.v1";
        nlohmann::ordered_json c;
        for (const Field& f : fields())
            if (auto v = f.get(cfg)) c[std::string(f.section) + "." + f.key] = *v;
        j["config"] = c;
        j["symbol"] = format_symbol(prof.symbol);
        j["q"] = prof.q;
        j["p"] = prof.p;
        j["m"] = prof.m;
        j["n_grid"] = prof.n;
        j["err_omega"] = prof.err_omega;
        j["err_m"] = prof.err_m;
        j["err_grid"] = prof.err_grid;
        j["err_total"] = prof.err_total;
        j["xi"] = prof.xi;
        j["value"] = prof.values;
        body = j.dump(2) + "\n";
    }
    emit(cfg, body, out);
    return 0;
}

int run_orbit(const RunConfig& cfg, std::ostream& out) {
    if (cfg.q < 1) throw UsageError("--q: must be >= 1");
    const int n = cfg.n_grid.value_or(256);
    const RotationSymbol s = rational_symbol(cfg.p, cfg.q);
    const TabulatedH t = window_table(family_of(cfg), n, rational_window(s.p, s.q), cfg.band_margin.value_or(-1));
    const Configuration orb = minimal_periodic_orbit(t, s.p, s.q);
    std::string body = "i,x_i\n";
    for (std::size_t i = 0; i < orb.size(); ++i)
        body += std::to_string(orb.start + static_cast<long>(i)) + "," + format_double(orb.x[i]) + "\n";
    body += csv_trailer(cfg, "orbit");
    emit(cfg, body, out);
    return 0;
}

int run_scan(const RunConfig& cfg, std::ostream& out) {
    const RotationSymbol s = symbol_of(cfg);
    if (s.kind == SymbolKind::rational)
        throw UsageError("--symbol: plain rational " + format_symbol(s) + " is rejected for circle verdicts");
    if (!(cfg.k_min < cfg.k_max)) throw UsageError("--k-min: must be below --k-max");
    if (cfg.k_min < 0.0) throw UsageError("--k-min: must be >= 0");
    if (cfg.steps < 2) throw UsageError("--steps: must be >= 2");
    if (cfg.refine < 0) throw UsageError("--refine: must be >= 0");
    const FamilySpec fam = family_of(cfg);
    const BarrierRequest req = request_of(cfg);
    ScanReport rep = breakup_scan(fam, s, cfg.k_min, cfg.k_max, cfg.steps, req);
    if (cfg.refine > 0) rep = refine_bracket(fam, s, rep, cfg.refine, req);
    std::string body = "k,verdict,sup_p,err_total\n";
    for (const ScanRow& r : rep.rows)
        body += format_double(r.k) + "," + verdict_name(r.verdict) + "," + format_double(r.sup_p) + "," +
                format_double(r.err_total) + "\n";
    if (rep.bracketed) body += "# bracket=" + format_double(rep.k_lo) + "," + format_double(rep.k_hi) + "\n";
    else body += "# bracket=none\n";
    body += std::string("# openness=") + (rep.openness_ok ? "ok" : "violated") + "\n";
    for (const std::string& w : rep.warnings) body += "# warning: " + w + "\n";
    body += csv_trailer(cfg, "scan");
    emit(cfg, body, out);
    return 0;
}

int run_holder(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const RotationSymbol s = symbol_of(cfg);
    if (s.kind != SymbolKind::irrational) throw UsageError("--symbol: holder needs an irrational symbol");
    if (!(cfg.budget > 0.0)) throw UsageError("--budget: must be positive");
    std::vector<double> deltas;
    for (const std::string& d : split(cfg.deltas, ',')) deltas.push_back(to_double(d, "--deltas"));
    if (deltas.empty()) throw UsageError("--deltas: empty list");
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
            throw UsageError("--deltas: must be positive and decreasing");
    ScheduleCaps caps{cfg.max_grid, cfg.max_steps};
    const std::vector<HolderRow> rows = holder_experiment(family_of(cfg), s.omega, deltas, cfg.budget, caps);
    std::string body = "delta,sup_dp,budget,bound,analytic_c0\n";
    bool ok = true;
    for (const HolderRow& r : rows) {
        body += format_double(r.delta) + "," + format_double(r.sup_dp) + "," + format_double(r.budget) + "," +
                format_double(r.bound) + "," + format_double(r.analytic_c0) + "\n";
        ok = ok && r.pass;
    }
    body += csv_trailer(cfg, "holder");
    emit(cfg, body, out);
    if (!ok) {
        err << "HolderBoundViolated: a row exceeds C0*delta^(1/3) + budget\n";
        return 1;
    }
    return 0;
}

SuiteCases cases_of(const RunConfig& cfg) {
    SuiteCases cases;
    if (cfg.cases.empty()) return cases;
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(cfg.cases, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw UsageError(std::string("--cases: ") + e.what());
    }
    if (auto v = tree.get_optional<std::string>("cases.q")) {
        cases.qs.clear();
        for (const auto& s : split(*v, ',')) cases.qs.push_back(to_long(s, "--cases q"));
    }
    if (auto v = tree.get_optional<std::string>("cases.m")) {
        cases.ms.clear();
        for (const auto& s : split(*v, ',')) cases.ms.push_back(to_long(s, "--cases m"));
    }
    if (auto v = tree.get_optional<std::string>("cases.omega")) {
        cases.omegas.clear();
        for (const auto& s : split(*v, ',')) {
            RotationSymbol sym;
            try {
                sym = parse_symbol(s);
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("--cases omega: ") + e.what());
            }
            if (sym.kind != SymbolKind::irrational) throw UsageError("--cases omega: must be irrational");
            cases.omegas.push_back(sym.omega);
        }
    }
    if (auto v = tree.get_optional<std::string>("cases.n_grid")) cases.n_grid = to_int(*v, "--cases n_grid");
    for (long q : cases.qs)
        if (q < 1) throw UsageError("--cases q: must be >= 1");
    for (long m : cases.ms)
        if (m < 2) throw UsageError("--cases m: must be >= 2");
    if (cases.qs.empty() || cases.ms.empty() || cases.omegas.empty())
        throw UsageError("--cases: q, m and omega lists must be nonempty");
    return cases;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const double k_prime = cfg.k_prime.value_or(cfg.k + 0.05);
    if (!(k_prime >= 0.0)) throw UsageError("--k-prime: must be >= 0");
    const SuiteReport rep = bound_suite(family_of(cfg), k_prime, cases_of(cfg));
    std::string body = "inequality,case,left,right,pass\n";
    long failed = 0;
    for (const SuiteRow& r : rep.rows) {
        body += r.inequality + "," + r.label + "," + format_double(r.left) + "," + format_double(r.right) + "," +
                (r.pass ? "true" : "false") + "\n";
        failed += r.pass ? 0 : 1;
    }
    body += csv_trailer(cfg, "verify");
    emit(cfg, body, out);
    if (failed > 0) {
        err << "SuiteFailed: " << failed << " inequality rows failed\n";
        return 1;
    }
    return 0;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::string format_config(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const Field& f : fields()) {
        const auto v = f.get(cfg);
        if (!v) continue;
        if (section != f.section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += std::string(f.key) + " = " + *v + "\n";
    }
    return out;
}

RunConfig parse_config(const std::string& ini_text) {
    boost::property_tree::ptree tree;
    std::istringstream in(ini_text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    for (const Field& f : fields()) {
        if (auto v = tree.get_optional<std::string>(std::string(f.section) + "." + f.key)) {
            try {
                f.set(cfg, *v);
            } catch (const UsageError& e) {
                throw std::invalid_argument(std::string("config ") + f.section + "." + f.key + ": " + e.what());
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("--config: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

int parse_and_dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Peierls barriers of monotone twist maps"};
    app.require_subcommand(1, 1);

    struct Command {
        CLI::App* app;
        std::string config;
        std::vector<std::pair<CLI::Option*, std::pair<std::string, std::string*>>> flags;
    };
    std::vector<std::unique_ptr<Command>> commands;
    std::vector<std::unique_ptr<std::string>> storage;
    auto add_command = [&](const std::string& name, const std::string& desc,
                           const std::vector<std::string>& flag_names) {
        auto cmd = std::make_unique<Command>();
        cmd->app = app.add_subcommand(name, desc);
        cmd->app->add_option("--config", cmd->config, "INI file with [map], [grid], [run] sections");
        for (const std::string& flag : flag_names) {
            storage.push_back(std::make_unique<std::string>());
            CLI::Option* opt = cmd->app->add_option(flag, *storage.back());
            cmd->flags.push_back({opt, {flag, storage.back().get()}});
        }
        commands.push_back(std::move(cmd));
    };
    add_command("barrier", "sampled barrier with its error budget",
                {"--map", "--k", "--k2", "--symbol", "--n-grid", "--m", "--n-dirichlet", "--budget", "--out",
                 "--format", "--band-margin", "--max-grid", "--max-steps"});
    add_command("orbit", "minimal periodic orbit",
                {"--map", "--k", "--k2", "--p", "--q", "--n-grid", "--out", "--band-margin"});
    add_command("scan", "invariant-circle verdicts over a k range",
                {"--map", "--k2", "--k-min", "--k-max", "--steps", "--symbol", "--budget", "--out", "--n-grid",
                 "--m", "--n-dirichlet", "--refine", "--band-margin", "--max-grid", "--max-steps"});
    add_command("holder", "barrier continuity under perturbation",
                {"--map", "--k", "--k2", "--symbol", "--deltas", "--budget", "--out", "--max-grid",
                 "--max-steps"});
    add_command("verify", "inequality suite",
                {"--map", "--k", "--k2", "--k-prime", "--cases", "--out"});

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    }

    Command* chosen = nullptr;
    for (auto& c : commands)
        if (c->app->parsed()) chosen = c.get();
    if (chosen == nullptr) {
        err << "usage: a subcommand is required\n";
        return 2;
    }
    const std::string name = chosen->app->get_name();

    RunConfig cfg;
    try {
        if (!chosen->config.empty()) cfg = load_config(chosen->config);
        for (const auto& [opt, flag] : chosen->flags)
            if (opt->count() > 0) field_for_flag(flag.first).set(cfg, *flag.second);
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (name == "barrier") return run_barrier(cfg, out);
        if (name == "orbit") return run_orbit(cfg, out);
        if (name == "scan") return run_scan(cfg, out);
        if (name == "holder") return run_holder(cfg, out, err);
        return run_verify(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    } catch (const AubryError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace aubry
