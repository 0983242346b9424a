#include "novfp/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "novfp/error.hpp"

namespace novfp {

NoveltyCurve novelty_curve(const EmbeddingMatrix& embeddings) {
    const std::size_t t = embeddings.rows();
    if (t < 2) throw InputError(embeddings.book_id + ": novelty curve needs at least 2 rows");
    std::vector<double> inv_norm(t);
    for (std::size_t i = 0; i < t; ++i) {
        double n2 = 0.0;
        for (float x : embeddings.row(i)) {
            if (!std::isfinite(x)) throw InputError(embeddings.book_id + ": non-finite embedding value");
            n2 += static_cast<double>(x) * x;
        }
        if (n2 <= 0.0) throw InputError(embeddings.book_id + ": zero-norm row " + std::to_string(i));
        inv_norm[i] = 1.0 / std::sqrt(n2);
    }
    NoveltyCurve curve{embeddings.book_id, std::vector<double>(t - 1)};
    for (std::size_t i = 0; i + 1 < t; ++i) {
        const auto a = embeddings.row(i);
        const auto b = embeddings.row(i + 1);
        double dot = 0.0;
        for (std::size_t d = 0; d < embeddings.dim; ++d) dot += static_cast<double>(a[d]) * b[d];
        curve.values[i] = std::clamp(1.0 - dot * inv_norm[i] * inv_norm[i + 1], 0.0, 2.0);
    }
    return curve;
}

std::array<double, 7> ScalarDynamics::as_array() const {
    if (!complete()) throw InputError("scalar dynamics incomplete (curve too short)");
    return {mean_novelty,   *speed,      *volume, *circuitousness, static_cast<double>(*reversal_count),
            novelty_std,    *trend_irregularity};
}

ScalarDynamics scalar_dynamics(std::span<const double> curve) {
    if (curve.empty()) throw InputError("scalar_dynamics: empty curve");
    const std::size_t n = curve.size();
    ScalarDynamics s;

    double sum = 0.0;
    for (double v : curve) sum += v;
    s.mean_novelty = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : curve) ss += (v - s.mean_novelty) * (v - s.mean_novelty);
    s.novelty_std = std::sqrt(ss / static_cast<double>(n));

    if (n < 2) {
        s.flags |= dynamics_flag::too_short_for_speed | dynamics_flag::too_short_for_reversals;
        return s;
    }

    double volume = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) volume += std::fabs(curve[i + 1] - curve[i]);
    s.volume = volume;
    s.speed = volume / static_cast<double>(n - 1);

    const double net = std::fabs(curve.back() - curve.front());
    if (net < kNetDisplacementFloor) {
        s.circuitousness = std::min(volume / kNetDisplacementFloor, kCircuitousnessCap);
        s.flags |= dynamics_flag::flat_net_displacement;
    } else {
        s.circuitousness = volume / net;
    }

    if (s.novelty_std < 1e-12) {
        s.trend_irregularity = 0.0;
        s.flags |= dynamics_flag::constant_curve;
    } else {
        // Odd lengths put the middle element in the second half.
        const std::size_t h = n / 2;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < h; ++i) m1 += curve[i];
        for (std::size_t i = h; i < n; ++i) m2 += curve[i];
        m1 /= static_cast<double>(h);
        m2 /= static_cast<double>(n - h);
        s.trend_irregularity = std::fabs(m2 - m1) / s.novelty_std;
    }

    if (n < 3) {
        s.flags |= dynamics_flag::too_short_for_reversals;
        return s;
    }
    // Plateaus (zero differences) are neither up nor down moves.
    long reversals = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = curve[i + 1] - curve[i];
        const int sign = (d > 0) - (d < 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++reversals;
        last_sign = sign;
    }
    s.reversal_count = reversals;
    return s;
}

std::vector<std::string> flag_names(unsigned flags) {
    std::vector<std::string> out;
    if (flags & dynamics_flag::flat_net_displacement) out.emplace_back("flat_net_displacement");
    if (flags & dynamics_flag::constant_curve) out.emplace_back("constant_curve");
    if (flags & dynamics_flag::too_short_for_speed) out.emplace_back("too_short_for_speed");
    if (flags & dynamics_flag::too_short_for_reversals) out.emplace_back("too_short_for_reversals");
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_integral_v<T>)
        return std::to_string(*v);
    else
        return fmt_double(*v);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string scalars_csv(std::span<const std::string> book_ids, std::span<const ScalarDynamics> rows) {
    std::ostringstream out;
    out << "book_id";
    for (auto c : kScalarColumns) out << ',' << c;
    out << ",flags\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::string flags;
        for (const auto& f : flag_names(r.flags)) flags += (flags.empty() ? "" : ";") + f;
        out << csv_escape(book_ids[i]) << ',' << fmt_double(r.mean_novelty) << ',' << cell(r.speed) << ','
            << cell(r.volume) << ',' << cell(r.circuitousness) << ',' << cell(r.reversal_count) << ','
            << fmt_double(r.novelty_std) << ',' << cell(r.trend_irregularity) << ',' << flags << '\n';
    }
    return out.str();
}

std::string scalars_json(std::span<const std::string> book_ids, std::span<const ScalarDynamics> rows) {
    using json = nlohmann::json;
    json books = json::array();
    auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        books.push_back({{"book_id", book_ids[i]},
                         {"values",
                          {{"mean_novelty", r.mean_novelty},
                           {"speed", opt(r.speed)},
                           {"volume", opt(r.volume)},
                           {"circuitousness", opt(r.circuitousness)},
                           {"reversal_count", opt(r.reversal_count)},
                           {"novelty_std", r.novelty_std},
                           {"trend_irregularity", opt(r.trend_irregularity)}}},
                         {"flags", flag_names(r.flags)}});
    }
    return json{{"columns", kScalarColumns}, {"books", books}}.dump(2);
}

}  // namespace novfp
