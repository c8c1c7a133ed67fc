#include "cumret/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cumret/backtest.hpp"
#include "cumret/bootstrap.hpp"
#include "cumret/boundcheck.hpp"
#include "cumret/format.hpp"
#include "cumret/indicators.hpp"
#include "cumret/reference.hpp"
#include "cumret/sweep.hpp"
#include "cumret/table.hpp"

#ifndef CUMRET_VERSION
#define CUMRET_VERSION "0.0.0"
#endif

namespace cumret::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Context {
    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;
};

Metadata metadata(const RunConfig& cfg)
{
    Metadata m;
    m.add("artifact", std::string("cumret-") + CUMRET_VERSION)
        .add("command", cfg.command)
        .add("seed", std::to_string(cfg.seed))
        .add("k", format_number(cfg.k))
        .add("M", std::to_string(cfg.replicas));
    return m;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << text;
}

std::filesystem::path out_dir(const RunConfig& cfg)
{
    return cfg.out.empty() ? std::filesystem::path(".") : cfg.out;
}

std::string render(const Table& table, const RunConfig& cfg)
{
    const Metadata meta = metadata(cfg);
    return cfg.format == Format::json ? table.to_json(meta) : table.to_csv(&meta);
}

std::string extension(const RunConfig& cfg)
{
    return cfg.format == Format::json ? ".json" : ".csv";
}

// Single-output commands print to stdout unless --out is given.
void emit(const Context& ctx, const std::string& stem, const Table& table)
{
    const std::string text = render(table, ctx.cfg);
    if (ctx.cfg.out.empty()) {
        ctx.out << text;
    } else {
        const auto path = ctx.cfg.out / (stem + extension(ctx.cfg));
        write_file(path, text);
        ctx.err << "wrote " << path.string() << "\n";
    }
}

struct LoadedSeries {
    PriceSeries series;
    std::vector<Issue> parse_warnings;
    ValidationReport report;
};

LoadedSeries load_checked(const Context& ctx, const std::string& path)
{
    auto parsed = load_ohlcv_file(resolve_data_path(path));
    auto report = validate(parsed.series);
    if (!report.ok()) {
        ctx.err << report.to_json_lines(parsed.series.symbol());
        throw DataError(parsed.series.symbol() + ": " + std::to_string(report.fatal_errors.size()) +
                        " fatal validation error(s)");
    }
    if (!parsed.warnings.empty() || !report.warnings.empty()) {
        ctx.err << parsed.series.symbol() << ": " << parsed.warnings.size() << " dropped row(s), "
                << report.warnings.size() << " validation warning(s)\n";
    }
    return LoadedSeries{std::move(parsed.series), std::move(parsed.warnings), std::move(report)};
}

const std::string& single_data(const RunConfig& cfg)
{
    if (cfg.data.size() != 1) {
        throw UsageError(cfg.command + " needs exactly one --data file");
    }
    return cfg.data.front();
}

std::string single_rule(const RunConfig& cfg)
{
    if (cfg.rules.size() != 1) {
        throw UsageError(cfg.command + " needs exactly one --rule");
    }
    return cfg.rules.front();
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json();
}

json trade_json(const Trade& t, const PriceSeries& s)
{
    return json{{"buy_index", t.buy_index},   {"buy_date", format_date(s[t.buy_index].date)},
                {"buy_price", t.buy_price},   {"sell_index", t.sell_index},
                {"sell_date", format_date(s[t.sell_index].date)},
                {"sell_price", t.sell_price}, {"return", trade_return(t)},
                {"forced", t.forced}};
}

json summary_json(const BootstrapSummary& s)
{
    json q = json::object();
    for (std::size_t i = 0; i < kQuantileLevels.size(); ++i) {
        q["p" + std::to_string(static_cast<int>(kQuantileLevels[i] * 100 + 0.5))] = s.cagr_quantiles[i];
    }
    return json{{"rule", s.rule},
                {"index", s.symbol},
                {"M", s.replicas},
                {"k", s.k},
                {"mean_r_bar", optional_json(s.mean_r_bar)},
                {"pooled_r_bar", optional_json(s.pooled_r_bar)},
                {"mean_R", s.mean_R},
                {"mean_cagr", s.mean_cagr},
                {"mean_cmv", s.mean_cmv},
                {"cagr_quantiles", q},
                {"mean_n", s.mean_n},
                {"replicas_with_no_trades", s.replicas_with_no_trades},
                {"trading_replicas", s.trading_replicas},
                {"bound_violations", s.bound_violations}};
}

// ---------------------------------------------------------------- commands

int cmd_ingest(const Context& ctx)
{
    if (ctx.cfg.data.empty()) {
        throw UsageError("ingest needs at least one --data file");
    }
    int status = 0;
    for (const auto& path : ctx.cfg.data) {
        ParseResult parsed = [&] {
            try {
                return load_ohlcv_file(resolve_data_path(path));
            } catch (const DataError& e) {
                ctx.out << json{{"file", path}, {"severity", "fatal"}, {"message", e.what()}}.dump() << "\n";
                throw;
            }
        }();
        const auto& symbol = parsed.series.symbol();
        for (const Issue& w : parsed.warnings) {
            ctx.out << json{{"symbol", symbol}, {"severity", "warning"}, {"line", w.location},
                            {"message", w.message}}
                           .dump()
                    << "\n";
        }
        const auto report = validate(parsed.series);
        ctx.out << report.to_json_lines(symbol);
        if (!report.ok()) {
            status = 1;
            continue;
        }
        if (!ctx.cfg.out.empty()) {
            write_file(ctx.cfg.out / (symbol + ".csv"), emit_ohlcv(parsed.series));
        }
    }
    return status;
}

int cmd_indicators(const Context& ctx)
{
    const auto loaded = load_checked(ctx, single_data(ctx.cfg));
    const auto& s = loaded.series;
    IndicatorSet all;
    for (auto name : rule_names()) {
        if (name == "RND") {
            continue;
        }
        for (auto& [key, series] : compute_rule_indicators(make_rule(name, ctx.cfg.options), s)) {
            if (key != "C") {
                all.insert_or_assign(key, series);
            }
        }
    }
    const auto dir = out_dir(ctx.cfg);
    for (const auto& [key, ind] : all) {
        Table t({"date", "value", "defined"});
        for (std::size_t i = 0; i < s.size(); ++i) {
            const bool def = ind.defined(i);
            t.add_row({format_date(s[i].date), def ? json(ind.at(i)) : json(), def});
        }
        write_file(dir / (key + extension(ctx.cfg)), render(t, ctx.cfg));
    }
    ctx.err << "wrote " << all.size() << " indicator files to " << dir.string() << "\n";
    return 0;
}

int cmd_signals(const Context& ctx)
{
    const auto loaded = load_checked(ctx, single_data(ctx.cfg));
    const auto& s = loaded.series;
    const RuleSpec rule = make_rule(single_rule(ctx.cfg), ctx.cfg.options);
    SignalSeries sig;
    if (rule.is_random()) {
        rng::Rng rng(rng::stream_seed(ctx.cfg.seed, "signals:RND", 0));
        sig = random_signals(rng, s.size());
    } else {
        sig = generate_signals(rule, s);
    }
    Table t({"date", "kind"});
    for (const Signal& e : sig.events) {
        t.add_row({format_date(s[e.index].date), std::string(to_string(e.kind))});
    }
    emit(ctx, "signals_" + rule.name, t);
    return 0;
}

int cmd_backtest(const Context& ctx)
{
    const auto loaded = load_checked(ctx, single_data(ctx.cfg));
    const auto& s = loaded.series;
    const RuleSpec rule = make_rule(single_rule(ctx.cfg), ctx.cfg.options);
    const Window w = ctx.cfg.window.value_or(Window{0, s.size() - 1});
    rng::Rng rng(rng::stream_seed(ctx.cfg.seed, "backtest:" + rule.name, 0));
    const auto res = run_backtest(rule, s, w, ctx.cfg.k, rng);
    const auto audit = check_bound(res.returns, ctx.cfg.k);

    json trades = json::array();
    Table t({"buy_index", "buy_date", "buy_price", "sell_index", "sell_date", "sell_price", "return", "forced"});
    for (const Trade& tr : res.trades) {
        trades.push_back(trade_json(tr, s));
        t.add_row({tr.buy_index, format_date(s[tr.buy_index].date), tr.buy_price, tr.sell_index,
                   format_date(s[tr.sell_index].date), tr.sell_price, trade_return(tr), tr.forced});
    }
    json doc{{"meta", metadata(ctx.cfg).to_json()},
             {"rule", rule.name},
             {"index", s.symbol()},
             {"window", {{"enter", w.enter}, {"exit", w.exit}}},
             {"n", res.n},
             {"r_bar", optional_json(res.r_bar)},
             {"R", res.R},
             {"k", res.k},
             {"cagr", res.cagr},
             {"cmv", buy_and_hold_cagr(s, w)},
             {"bound", {{"value", audit.bound}, {"slack", audit.slack}, {"holds", audit.holds}}},
             {"trades", trades}};
    const std::string text = doc.dump(2) + "\n";
    if (ctx.cfg.out.empty()) {
        ctx.out << text;
    } else {
        write_file(ctx.cfg.out / ("backtest_" + rule.name + ".json"), text);
        const Metadata meta = metadata(ctx.cfg);
        write_file(ctx.cfg.out / ("trades_" + rule.name + ".csv"), t.to_csv(&meta));
    }
    return audit.holds ? 0 : 1;
}

int cmd_bound(const Context& ctx)
{
    const auto& cfg = ctx.cfg;
    if (cfg.stress_cases > 0) {
        StressConfig sc;
        sc.cases = cfg.stress_cases;
        sc.seed = cfg.seed;
        sc.workers = cfg.workers;
        const auto res = run_bound_stress(sc);
        json doc{{"meta", metadata(cfg).to_json()},
                 {"cases", res.cases},
                 {"violations", res.violations},
                 {"log_space_cases", res.log_space_cases},
                 {"max_log_excess", res.max_log_excess}};
        ctx.out << doc.dump(2) << "\n";
        return res.violations == 0 ? 0 : 1;
    }
    if (!cfg.curve) {
        throw UsageError("bound needs --stress <cases> or --curve");
    }
    if (cfg.nmax == 0) {
        throw UsageError("bound --curve needs --nmax >= 1");
    }
    rng::Rng rng(rng::stream_seed(cfg.seed, "bound-curve", 0));
    const auto curve = decay_curve(cfg.k, cfg.rbar, cfg.nmax, rng, cfg.spread);
    Table t({"n", "R", "bound", "envelope"});
    bool ok = true;
    for (const auto& p : curve) {
        ok = ok && p.R <= p.bound * (1.0 + kBoundTolerance);
        t.add_row({p.n, p.R, p.bound, p.envelope});
    }
    emit(ctx, "bound_curve", t);
    return ok ? 0 : 1;
}

std::vector<RuleSpec> rule_specs(const RunConfig& cfg)
{
    std::vector<RuleSpec> out;
    for (const auto& r : cfg.rules) {
        out.push_back(make_rule(r, cfg.options));
    }
    return out;
}

BootstrapConfig bootstrap_config(const RunConfig& cfg)
{
    BootstrapConfig bc;
    bc.replicas = cfg.replicas;
    bc.min_window = cfg.min_window;
    bc.k = cfg.k;
    bc.seed = cfg.seed;
    bc.rules = cfg.rules;
    bc.workers = cfg.workers;
    return bc;
}

int cmd_bootstrap(const Context& ctx)
{
    const auto& cfg = ctx.cfg;
    if (cfg.data.empty()) {
        throw UsageError("bootstrap needs at least one --data file");
    }
    const auto bc = bootstrap_config(cfg);
    const auto rules = rule_specs(cfg);

    SummaryGrid grid;
    std::map<std::string, double> cmv;
    std::vector<std::string> index_order;
    json summaries = json::array();
    std::size_t violations = 0;
    for (const auto& path : cfg.data) {
        const auto loaded = load_checked(ctx, path);
        const auto& s = loaded.series;
        index_order.push_back(s.symbol());
        cmv[s.symbol()] = bootstrap_cmv(bc, s);
        for (const auto& rule : rules) {
            auto summary = run_bootstrap(bc, s, rule);
            violations += summary.bound_violations;
            summaries.push_back(summary_json(summary));
            grid[rule.name][s.symbol()] = std::move(summary);
        }
    }
    const auto tables = summarize_tables(grid, cmv, cfg.rules, index_order);

    std::vector<std::string> cols{"rule"};
    cols.insert(cols.end(), tables.indices.begin(), tables.indices.end());
    Table t2(cols);
    Table t3(cols);
    {
        std::vector<json> row{"CMV"};
        for (const auto& v : tables.cmv) {
            row.push_back(optional_json(v));
        }
        t3.add_row(std::move(row));
    }
    for (std::size_t r = 0; r < tables.rules.size(); ++r) {
        std::vector<json> row2{tables.rules[r]};
        std::vector<json> row3{tables.rules[r]};
        for (std::size_t i = 0; i < tables.indices.size(); ++i) {
            row2.push_back(optional_json(tables.r_bar[r][i]));
            row3.push_back(optional_json(tables.cagr[r][i]));
        }
        t2.add_row(std::move(row2));
        t3.add_row(std::move(row3));
    }
    Table box({"index", "rule", "p05", "p25", "p50", "p75", "p95", "mean"});
    for (const auto& b : tables.box) {
        box.add_row({b.index, b.rule, b.quantiles[0], b.quantiles[1], b.quantiles[2], b.quantiles[3],
                     b.quantiles[4], b.mean});
    }

    // Side-by-side with the published values where the index symbol matches.
    Table cmp({"table", "rule", "index", "value", "reference"});
    using reference::TableKind;
    for (std::size_t i = 0; i < tables.indices.size(); ++i) {
        const auto& idx = tables.indices[i];
        cmp.add_row({"cmv", "CMV", idx, optional_json(tables.cmv[i]),
                     optional_json(reference::find_reference(TableKind::cmv, "CMV", idx))});
    }
    for (std::size_t r = 0; r < tables.rules.size(); ++r) {
        const auto& rule = tables.rules[r];
        for (std::size_t i = 0; i < tables.indices.size(); ++i) {
            const auto& idx = tables.indices[i];
            cmp.add_row({"r_bar", rule, idx, optional_json(tables.r_bar[r][i]),
                         optional_json(reference::find_reference(TableKind::r_bar, rule, idx))});
            cmp.add_row({"cagr", rule, idx, optional_json(tables.cagr[r][i]),
                         optional_json(reference::find_reference(TableKind::cagr, rule, idx))});
        }
    }

    const auto dir = out_dir(cfg);
    const Metadata meta = metadata(cfg);
    write_file(dir / "table2.csv", t2.to_csv(&meta));
    write_file(dir / "table3.csv", t3.to_csv(&meta));
    write_file(dir / "fig5_boxdata.csv", box.to_csv(&meta));
    write_file(dir / "reference_comparison.csv", cmp.to_csv(&meta));
    json doc{{"meta", meta.to_json()}, {"summaries", summaries}, {"bound_violations", violations}};
    write_file(dir / "summary.json", doc.dump(2) + "\n");

    // Market-beating report: how many rules out-earn buy-and-hold per index.
    for (std::size_t i = 0; i < tables.indices.size(); ++i) {
        std::size_t below = 0;
        std::size_t positive = 0;
        for (std::size_t r = 0; r < tables.rules.size(); ++r) {
            const auto& c = tables.cagr[r][i];
            below += (c && tables.cmv[i] && *c < *tables.cmv[i]) ? 1 : 0;
            positive += (c && *c > 0.0) ? 1 : 0;
        }
        ctx.out << tables.indices[i] << ": CMV=" << format_number(tables.cmv[i].value_or(0.0)) << ", "
                << below << "/" << tables.rules.size() << " rules below CMV, " << positive
                << " with positive CAGR\n";
    }
    ctx.err << "wrote table2.csv, table3.csv, fig5_boxdata.csv, reference_comparison.csv, summary.json to "
            << dir.string() << "\n";
    return violations == 0 ? 0 : 1;
}

KGrid parse_k_grid(const std::string& text)
{
    std::vector<double> parts;
    std::size_t from = 0;
    while (true) {
        const std::size_t pos = text.find(':', from);
        const auto piece = text.substr(from, pos == std::string::npos ? std::string::npos : pos - from);
        const auto v = parse_finite(piece);
        if (!v) {
            throw UsageError("bad --k-grid '" + text + "', expected lo:hi:step");
        }
        parts.push_back(*v);
        if (pos == std::string::npos) {
            break;
        }
        from = pos + 1;
    }
    if (parts.size() != 3) {
        throw UsageError("bad --k-grid '" + text + "', expected lo:hi:step");
    }
    return KGrid{parts[0], parts[1], parts[2]};
}

int cmd_sweep_k(const Context& ctx)
{
    const auto loaded = load_checked(ctx, single_data(ctx.cfg));
    const auto rules = rule_specs(ctx.cfg);
    const auto rows = sweep_k(rules, loaded.series, parse_k_grid(ctx.cfg.k_grid), bootstrap_config(ctx.cfg));
    Table t({"rule", "k", "mean_R"});
    for (const auto& r : rows) {
        t.add_row({r.rule, r.k, r.mean_R});
    }
    emit(ctx, "sweep_k", t);
    return 0;
}

int cmd_sweep_n(const Context& ctx)
{
    const auto loaded = load_checked(ctx, single_data(ctx.cfg));
    const RuleSpec rule = make_rule(ctx.cfg.rules.empty() ? "RND" : single_rule(ctx.cfg), ctx.cfg.options);
    const std::size_t nmax = ctx.cfg.nmax == 0 ? 500 : ctx.cfg.nmax;
    const auto rows = sweep_n(rule, loaded.series, ctx.cfg.k_list, nmax, ctx.cfg.seed);
    Table t({"k", "n", "R", "bound"});
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.holds;
        t.add_row({r.k, r.n, r.R, r.bound});
    }
    emit(ctx, "sweep_n", t);
    return ok ? 0 : 1;
}

int cmd_reference(const Context& ctx)
{
    const auto& cfg = ctx.cfg;
    if (!reference::fixture_intact()) {
        ctx.err << "reference fixture checksum mismatch\n";
        return 1;
    }
    if (!cfg.ref_table.empty() || !cfg.ref_rule.empty() || !cfg.ref_index.empty()) {
        const auto kind = reference::parse_table_kind(cfg.ref_table);
        if (!kind || cfg.ref_index.empty()) {
            throw UsageError("reference lookup needs --table r_bar|cagr|cmv, --rule and --index");
        }
        ctx.out << format_number(reference::lookup_reference(*kind, cfg.ref_rule, cfg.ref_index)) << "\n";
        return 0;
    }
    if (cfg.format == Format::json) {
        const auto& t = reference::bundled();
        json doc{{"meta", metadata(cfg).to_json()}, {"r_bar", t.r_bar}, {"cagr", t.cagr}, {"cmv", t.cmv}};
        ctx.out << doc.dump(2) << "\n";
    } else {
        ctx.out << reference::embedded_csv();
    }
    return 0;
}

Window parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("bad --window '" + text + "', expected enter:exit");
    }
    try {
        std::size_t used = 0;
        const auto a = std::stoull(text.substr(0, colon), &used);
        const auto b_text = text.substr(colon + 1);
        const auto b = std::stoull(b_text, &used);
        if (used != b_text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return Window{static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
    } catch (const std::logic_error&) {
        throw UsageError("bad --window '" + text + "', expected enter:exit");
    }
}

std::vector<double> parse_k_list(const std::string& text)
{
    std::vector<double> out;
    std::size_t from = 0;
    while (from <= text.size()) {
        const std::size_t pos = text.find(',', from);
        const auto piece = text.substr(from, pos == std::string::npos ? std::string::npos : pos - from);
        const auto v = parse_finite(piece);
        if (!v) {
            throw UsageError("bad --k-list '" + text + "'");
        }
        out.push_back(*v);
        if (pos == std::string::npos) {
            break;
        }
        from = pos + 1;
    }
    return out;
}

}  // namespace

std::filesystem::path resolve_data_path(const std::string& path)
{
    const std::filesystem::path p(path);
    if (p.is_absolute() || std::filesystem::exists(p)) {
        return p;
    }
    if (const char* root = std::getenv("CUMRET_DATA_DIR"); root != nullptr && *root != '\0') {
        return std::filesystem::path(root) / p;
    }
    return p;
}

std::vector<std::string> parse_rule_list(const std::string& text)
{
    std::vector<std::string> out;
    if (text == "ALL") {
        for (auto r : reference::rule_order()) {
            out.emplace_back(r);
        }
        return out;
    }
    std::size_t from = 0;
    while (from <= text.size()) {
        const std::size_t pos = text.find(',', from);
        auto name = text.substr(from, pos == std::string::npos ? std::string::npos : pos - from);
        make_rule(name);  // validates
        out.push_back(std::move(name));
        if (pos == std::string::npos) {
            break;
        }
        from = pos + 1;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Cumulative-return bounds and technical-rule bootstrap backtests", "cumret"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "csv";
    std::string out_path;
    app.add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();
    app.add_option("--k", cfg.k, "Transaction cost rate per round trip")->capture_default_str();
    app.add_option("--out", out_path, "Output directory");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    std::string rule;
    std::string rules = "ALL";
    std::string window;
    std::string k_list;
    std::string ema_mode = "paper";
    std::string dmi = "wilder";

    auto add_rule_options = [&](CLI::App* sub) {
        sub->add_option("--ema-mode", ema_mode, "EMA smoothing: paper (1/(n+1)) or conventional (2/(n+1))")
            ->check(CLI::IsMember({"paper", "conventional"}));
        sub->add_option("--dmi", dmi, "DMI convention")->check(CLI::IsMember({"wilder", "paper_literal"}));
        sub->add_flag("--paper-literal-mom", cfg.options.paper_literal_mom, "MOM crosses 0 instead of 100");
    };

    auto* ingest = app.add_subcommand("ingest", "Parse and validate OHLCV CSV files");
    ingest->add_option("--data", cfg.data, "CSV files")->required();

    auto* indicators = app.add_subcommand("indicators", "Write one CSV per indicator");
    indicators->add_option("--data", cfg.data, "CSV file")->required();
    add_rule_options(indicators);

    auto* signals = app.add_subcommand("signals", "Emit the raw buy/sell stream of a rule");
    signals->add_option("--rule", rule, "Rule name")->required();
    signals->add_option("--data", cfg.data, "CSV file")->required();
    add_rule_options(signals);

    auto* backtest = app.add_subcommand("backtest", "Backtest one rule over one window");
    backtest->add_option("--rule", rule, "Rule name")->required();
    backtest->add_option("--data", cfg.data, "CSV file")->required();
    backtest->add_option("--window", window, "enter:exit bar indices (default: whole series)");
    add_rule_options(backtest);

    auto* bound = app.add_subcommand("bound", "Upper-bound stress audit or decay curve");
    bound->add_option("--stress", cfg.stress_cases, "Number of randomized cases");
    bound->add_option("--workers", cfg.workers, "Worker threads");
    bound->add_flag("--curve", cfg.curve, "Emit n,R,bound,envelope");
    bound->add_option("--rbar", cfg.rbar, "Target mean trade return");
    bound->add_option("--nmax", cfg.nmax, "Number of trades");
    bound->add_option("--spread", cfg.spread, "Half-width of the paired return perturbation")->capture_default_str();

    auto* boot = app.add_subcommand("bootstrap", "Bootstrap all selected rules over all data files");
    boot->add_option("--rules", rules, "ALL or comma list")->capture_default_str();
    boot->add_option("--data", cfg.data, "CSV files")->required();
    boot->add_option("--M", cfg.replicas, "Replicas per rule and index")->capture_default_str();
    boot->add_option("--min-window", cfg.min_window, "Minimum window length in bars")->capture_default_str();
    boot->add_option("--workers", cfg.workers, "Worker threads (results do not depend on it)");
    add_rule_options(boot);

    auto* sweepk = app.add_subcommand("sweep-k", "Bootstrap mean R over a grid of cost rates");
    sweepk->add_option("--rules", rules, "ALL or comma list")->capture_default_str();
    sweepk->add_option("--data", cfg.data, "CSV file")->required();
    sweepk->add_option("--k-grid", cfg.k_grid, "lo:hi:step")->capture_default_str();
    sweepk->add_option("--M", cfg.replicas, "Replicas per rule")->capture_default_str();
    sweepk->add_option("--min-window", cfg.min_window, "Minimum window length in bars")->capture_default_str();
    sweepk->add_option("--workers", cfg.workers, "Worker threads");
    add_rule_options(sweepk);

    auto* sweepn = app.add_subcommand("sweep-n", "Running R and bound as trades accumulate");
    sweepn->add_option("--rule", rule, "Rule name (default RND)");
    sweepn->add_option("--data", cfg.data, "CSV file")->required();
    sweepn->add_option("--k-list", k_list, "Comma-separated cost rates (default 0.001,0.003,0.005,0.007)");
    sweepn->add_option("--nmax", cfg.nmax, "Maximum number of trades (default 500)");
    add_rule_options(sweepn);

    auto* ref = app.add_subcommand("reference", "Print the bundled published tables or one cell");
    ref->add_option("--table", cfg.ref_table, "r_bar, cagr or cmv");
    ref->add_option("--rule", cfg.ref_rule, "Rule name (CMV for the market row)");
    ref->add_option("--index", cfg.ref_index, "DJIA, FTSE, N225 or SCI");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.format = format == "json" ? Format::json : Format::csv;
        cfg.out = out_path;
        cfg.options.ema_mode = ema_mode == "conventional" ? EmaMode::conventional : EmaMode::paper;
        cfg.options.dmi_convention = dmi == "paper_literal" ? DmiConvention::paper_literal : DmiConvention::wilder;
        require_cost_rate(cfg.k);
        if (!rule.empty()) {
            make_rule(rule);
            cfg.rules = {rule};
        } else if (cfg.command == "bootstrap" || cfg.command == "sweep-k") {
            cfg.rules = parse_rule_list(rules);
        }
        if (!window.empty()) {
            cfg.window = parse_window(window);
        }
        if (!k_list.empty()) {
            cfg.k_list = parse_k_list(k_list);
        }

        const Context ctx{cfg, out, err};
        if (cfg.command == "ingest") {
            return cmd_ingest(ctx);
        }
        if (cfg.command == "indicators") {
            return cmd_indicators(ctx);
        }
        if (cfg.command == "signals") {
            return cmd_signals(ctx);
        }
        if (cfg.command == "backtest") {
            return cmd_backtest(ctx);
        }
        if (cfg.command == "bound") {
            return cmd_bound(ctx);
        }
        if (cfg.command == "bootstrap") {
            return cmd_bootstrap(ctx);
        }
        if (cfg.command == "sweep-k") {
            return cmd_sweep_k(ctx);
        }
        if (cfg.command == "sweep-n") {
            return cmd_sweep_n(ctx);
        }
        if (cfg.command == "reference") {
            return cmd_reference(ctx);
        }
        throw UsageError("unknown command " + cfg.command);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cumret::cli
