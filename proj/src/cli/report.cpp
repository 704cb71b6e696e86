#include "kljn/cli.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace kljn {

namespace {

std::string cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

std::string cell(bool b) { return b ? "1" : "0"; }

std::string cell(std::size_t n) { return std::to_string(n); }

void write_line(std::ostream& os, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            os << ',';
        os << fields[i];
    }
    os << '\n';
}

void add_interval(std::vector<std::string>& header, std::vector<std::string>* row,
                  std::string_view name, const std::optional<Interval>& iv)
{
    for (std::string_view suffix : {"", "_low", "_high"}) {
        header.push_back(std::string(name) + std::string(suffix));
    }
    if (!row)
        return;
    row->push_back(iv ? format_number(iv->estimate) : "");
    row->push_back(iv ? format_number(iv->low) : "");
    row->push_back(iv ? format_number(iv->high) : "");
}

/// Header and (optionally) values of the one-line report summary.
std::vector<std::string> summary_columns(const DetectionReport* rep, std::vector<std::string>* row)
{
    std::vector<std::string> h;
    auto plain = [&](std::string_view name, std::string value) {
        h.emplace_back(name);
        if (row)
            row->push_back(std::move(value));
    };
    auto iv = [&](std::string_view name, std::optional<Interval> v) {
        add_interval(h, row, name, v);
    };
    const bool have = rep != nullptr;
    const DetectionReport empty;
    const auto& r = have ? *rep : empty;

    plain("scenario", std::string(to_string(r.scenario.variant)));
    plain("mode", r.mode == RunMode::key ? "key" : "bep");
    plain("trials", cell(r.trials));
    plain("beps", cell(r.tally.beps));
    iv("detection_rate", r.detection_rate);
    iv("instant_rate", r.instant_rate);
    iv("dc_rate", r.dc_rate);
    iv("ac_rate", r.ac_rate);
    iv("wide_margin_rate", r.wide_margin_rate);
    iv("secure_fraction", r.secure_fraction);
    iv("misclassification_rate", r.misclassification_rate);
    iv("honest_ber", r.honest_ber);
    iv("per_sample_agreement", r.per_sample_agreement);
    plain("decay_p", cell(r.fit ? std::optional<double>(r.fit->p) : std::nullopt));
    plain("decay_r2", cell(r.fit ? std::optional<double>(r.fit->r2) : std::nullopt));
    iv("eve_accuracy", r.eve_accuracy);
    plain("mean_corr_toward_A", cell(r.mean_corr_toward_A));
    plain("mean_corr_toward_B", cell(r.mean_corr_toward_B));
    iv("abort_rate", r.abort_rate);
    iv("key_agreement", r.key_agreement);
    iv("mean_secure_beps_to_detection", r.mean_secure_beps_to_detection);
    return h;
}

}  // namespace

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_report_csv(std::ostream& os, const DetectionReport& report)
{
    os << "scenario,trial,bep_index,alice_choice,partner_choice,state,secure,alice_classified,"
          "bob_classified,bit,flag_instant,flag_dc_alice,flag_dc_bob,flag_ac,first_flag_index,"
          "mean_i_alice,mean_i_bob,var_i_alice,corr_toward_A,corr_toward_B,eve_guess\n";
    const std::string scenario(to_string(report.scenario.variant));
    for (const auto& r : report.rows) {
        const auto& bit = r.alice_bit ? r.alice_bit : r.bob_bit;
        write_line(os, {scenario,
                        cell(r.trial),
                        cell(r.bep_index),
                        std::string(to_string(r.alice_choice)),
                        std::string(to_string(r.bob_choice)),
                        std::string(to_string(r.state)),
                        cell(r.secure),
                        std::string(to_string(r.alice_classified)),
                        std::string(to_string(r.bob_classified)),
                        bit ? std::to_string(*bit) : "",
                        cell(r.flag_instant),
                        cell(r.flag_dc_alice),
                        cell(r.flag_dc_bob),
                        cell(r.flag_ac),
                        r.instant.first_flag_index ? cell(*r.instant.first_flag_index) : "",
                        format_number(r.mean_i_alice),
                        format_number(r.mean_i_bob),
                        format_number(r.var_i_alice),
                        cell(r.corr_toward_A),
                        cell(r.corr_toward_B),
                        r.eve_guess ? std::string(to_string(*r.eve_guess)) : ""});
    }
}

void write_summary_csv(std::ostream& os, const DetectionReport& report)
{
    write_line(os, summary_columns(nullptr, nullptr));
    std::vector<std::string> row;
    summary_columns(&report, &row);
    write_line(os, row);
}

void write_hidden_curve_csv(std::ostream& os, const DetectionReport& report)
{
    os << "stratum,trials,horizon,hidden,hidden_low,hidden_high\n";
    auto emit = [&](const std::string& key, std::size_t trials,
                    const std::vector<HiddenPoint>& curve) {
        for (const auto& p : curve)
            write_line(os, {key, cell(trials), cell(p.horizon), format_number(p.hidden.estimate),
                            format_number(p.hidden.low), format_number(p.hidden.high)});
    };
    emit("all", report.rows.size(), report.hidden_curve);
    for (const auto& s : report.strata)
        emit(s.key, s.trials, s.curve);
}

void write_sweep_csv(std::ostream& os, SweepParameter parameter, std::span<const double> values,
                     std::span<const DetectionReport> reports)
{
    auto header = summary_columns(nullptr, nullptr);
    header.insert(header.begin(), {"parameter", "value"});
    write_line(os, header);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::vector<std::string> row{std::string(to_string(parameter)), format_number(values[i])};
        summary_columns(&reports[i], &row);
        write_line(os, row);
    }
}

void write_validation_csv(std::ostream& os, const AuditResult& audit)
{
    os << "state,quantity,analytic,simulated,relative_error,pass\n";
    for (const auto& r : audit.rows)
        write_line(os, {std::string(to_string(r.state)), r.quantity, format_number(r.analytic),
                        format_number(r.simulated), format_number(r.relative_error),
                        cell(r.pass)});
}

}  // namespace kljn
