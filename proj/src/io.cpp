#include "rankone/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace rankone {

std::string format_double(double value) {
    std::array<char, 40> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& bundle) {
    out << "t,j,re,im,method\n";
    for (std::size_t s = 0; s < bundle.grid.points.size(); ++s) {
        const std::string t_str = format_double(bundle.grid.points[s]);
        for (int j = 0; j < bundle.lambdas[s].size(); ++j) {
            out << t_str << ',' << j << ',' << format_double(bundle.lambdas[s][j].real()) << ','
                << format_double(bundle.lambdas[s][j].imag()) << ',' << bundle.method << '\n';
        }
    }
}

namespace {

double parse_double(std::string_view field) {
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ConfigError("trajectory CSV: bad numeric field '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line, std::size_t expect) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (fields.size() != expect) throw ConfigError("trajectory CSV: wrong field count");
    return fields;
}

}  // namespace

TrajectoryBundle read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,j,re,im,method")
        throw ConfigError("trajectory CSV: missing or unexpected header");

    TrajectoryBundle bundle;
    std::vector<Complex> row_values;
    std::vector<int> row_indices;
    double cur_t = 0.0;
    bool have_rows = false;

    const auto flush_time = [&]() {
        if (row_values.empty()) return;
        Eigen::VectorXcd lam(static_cast<int>(row_values.size()));
        for (std::size_t k = 0; k < row_values.size(); ++k) {
            if (row_indices[k] != static_cast<int>(k))
                throw ConfigError("trajectory CSV: indices not contiguous within a time block");
            lam[static_cast<int>(k)] = row_values[k];
        }
        bundle.grid.points.push_back(cur_t);
        bundle.lambdas.push_back(std::move(lam));
        row_values.clear();
        row_indices.clear();
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line, 5);
        const double t = parse_double(fields[0]);
        const int j = static_cast<int>(parse_double(fields[1]));
        const double re = parse_double(fields[2]);
        const double im = parse_double(fields[3]);
        const std::string method(fields[4]);
        if (!have_rows) {
            bundle.method = method;
            cur_t = t;
            have_rows = true;
        } else if (method != bundle.method) {
            throw ConfigError("trajectory CSV: mixed method tags");
        }
        if (t != cur_t) {
            flush_time();
            cur_t = t;
        }
        row_indices.push_back(j);
        row_values.emplace_back(re, im);
    }
    flush_time();
    if (bundle.grid.points.empty()) throw ConfigError("trajectory CSV: no data rows");

    double dt_max = 0.0;
    for (std::size_t s = 1; s < bundle.grid.points.size(); ++s)
        dt_max = std::max(dt_max, bundle.grid.points[s] - bundle.grid.points[s - 1]);
    bundle.grid.dt_max = dt_max;
    return bundle;
}

void write_local_law_csv(std::ostream& out, const LocalLawReport& report) {
    out << "re,im,raw_error,normalized_error\n";
    for (std::size_t k = 0; k < report.grid.size(); ++k) {
        out << format_double(report.grid[k].real()) << ',' << format_double(report.grid[k].imag())
            << ',' << format_double(report.raw_error[k]) << ','
            << format_double(report.normalized_error[k]) << '\n';
    }
}

void write_emergence_csv(std::ostream& out, const EmergenceCurve& curve) {
    out << "t,frequency,trials,n\n";
    for (std::size_t k = 0; k < curve.t_values.size(); ++k) {
        out << format_double(curve.t_values[k]) << ',' << format_double(curve.frequency[k]) << ','
            << curve.trials << ',' << curve.n << '\n';
    }
}

void write_origin_csv(std::ostream& out, const OriginHistogram& hist) {
    out << "rank,count\n";
    for (std::size_t rank = 0; rank < hist.counts.size(); ++rank)
        out << rank << ',' << hist.counts[rank] << '\n';
}

nlohmann::json run_metadata(const RunConfig& config, const TraceOptions& tols) {
    return nlohmann::json{
        {"n", config.n},
        {"ensemble", to_string(config.ensemble)},
        {"seed", config.seed},
        {"rng", config.rng},
        {"tolerances",
         {{"newton_tol", tols.newton_tol},
          {"step_tol", tols.step_tol},
          {"residual_floor", tols.residual_floor},
          {"max_newton_iters", tols.max_newton_iters},
          {"collision_tol", tols.collision_tol},
          {"dt_min", tols.dt_min}}},
    };
}

void to_json(nlohmann::json& j, const StepDiagnostics& d) {
    j = nlohmann::json{
        {"t", d.t}, {"newton_iters", d.newton_iters}, {"min_distance", d.min_distance}};
}

void to_json(nlohmann::json& j, const OutlierReport& r) {
    j = nlohmann::json{{"t", r.t},
                       {"t_star", r.t_star},
                       {"outlier_index", r.outlier_index},
                       {"outlier_value", {{"re", r.outlier_value.real()}, {"im", r.outlier_value.imag()}}},
                       {"disk_radius", r.disk_radius},
                       {"in_disk", r.in_disk},
                       {"bulk_bound", r.bulk_bound},
                       {"bulk_max_im", r.bulk_max_im},
                       {"separated", r.separated}};
}

void to_json(nlohmann::json& j, const ConfinementReport& r) {
    j = nlohmann::json{{"checked", r.checked},
                       {"skipped_times", r.skipped_times},
                       {"union_violations", r.union_violations},
                       {"hyperbolic_violations", r.hyperbolic_violations},
                       {"worst_union_margin", r.worst_union_margin},
                       {"worst_hyperbolic_margin", r.worst_hyperbolic_margin}};
}

void to_json(nlohmann::json& j, const SmallTReport& r) {
    j = nlohmann::json{{"checked_a", r.checked_a},
                       {"violations_a", r.violations_a},
                       {"worst_margin_a", r.worst_margin_a},
                       {"checked_b", r.checked_b},
                       {"violations_b", r.violations_b},
                       {"worst_margin_b", r.worst_margin_b}};
}

void to_json(nlohmann::json& j, const LargeTReport& r) {
    j = nlohmann::json{{"checked_times", r.checked_times},
                       {"outlier_violations", r.outlier_violations},
                       {"bulk_violations", r.bulk_violations},
                       {"outlier_tolerance", r.outlier_tolerance},
                       {"worst_outlier_distance", r.worst_outlier_distance},
                       {"worst_bulk_margin", r.worst_bulk_margin}};
}

void to_json(nlohmann::json& j, const EmergenceCurve& c) {
    j = nlohmann::json{{"t_values", c.t_values},
                       {"frequency", c.frequency},
                       {"trials", c.trials},
                       {"n", c.n},
                       {"failures", c.failures}};
}

void to_json(nlohmann::json& j, const OriginHistogram& h) {
    j = nlohmann::json{{"n", h.n},
                       {"trials", h.trials},
                       {"t_final", h.t_final},
                       {"counts", h.counts},
                       {"origin_ranks", h.origin_ranks},
                       {"center_distances", h.center_distances},
                       {"failures", h.failures}};
    j["label_stable"] = nlohmann::json::array();
    for (const char flag : h.label_stable) j["label_stable"].push_back(flag != 0);
}

void to_json(nlohmann::json& j, const LocalLawReport& r) {
    j = nlohmann::json{{"points", r.grid.size()}, {"sup_normalized", r.sup_normalized}};
}

void to_json(nlohmann::json& j, const DomainParams& p) {
    j = nlohmann::json{{"epsilon", p.epsilon},
                       {"zeta", p.zeta},
                       {"t_cap", p.t_cap},
                       {"n", p.n},
                       {"t_max", p.t_max}};
}

}  // namespace rankone
