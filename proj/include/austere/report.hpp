#pragma once

// Serialization of austerity reports: canonical JSON, a flattened CSV, and
// an SVG plot of the phase curve Im[det(I - i tau H) + tau^2 cos^2(theta) det(I - i tau H_clipped)].

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "austere/austerity.hpp"
#include "austere/slag_check.hpp"

namespace austere {

inline constexpr const char* kReportSchema = "austere-kit/report/1";
inline constexpr const char* kToolVersion = "1.0.0";

inline nlohmann::json to_json(const RVec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline nlohmann::json to_json(const PointRecord& p, std::size_t index) {
    return {{"index", index},
            {"u", to_json(p.u)},
            {"ranks", {{"H", p.rank_H}, {"D", p.rank_D}, {"E", p.rank_E}, {"N", p.rank_N}}},
            {"rank_ambiguous", p.rank_ambiguous},
            {"trace_norm", p.trace_norm},
            {"ii_norm", p.ii_norm}};
}

inline nlohmann::json to_json(const SampleRecord& s) {
    return {{"point", s.point},
            {"u", to_json(s.u)},
            {"nu", to_json(s.nu)},
            {"theta", s.theta},
            {"normal_branch", s.normal_branch},
            {"residuals", to_json(s.residuals)},
            {"lagrangian_defect", s.lagrangian_defect},
            {"embedding_defect", s.embedding_defect},
            {"det_s_error", s.det_s_error},
            {"det_s_phase", s.det_s_phase},
            {"lemma2_error", s.lemma2_error ? nlohmann::json(*s.lemma2_error) : nlohmann::json(nullptr)}};
}

inline nlohmann::json summary_json(const AusterityReport& r) {
    return {{"label", r.label},
            {"n", r.n},
            {"k", r.k},
            {"verdict", to_string(r.verdict)},
            {"point_count", r.points.size()},
            {"sample_count", r.samples.size()},
            {"ambiguous_points", r.ambiguous_points},
            {"max_residual", r.max_residual},
            {"max_trace", r.max_trace},
            {"max_ii_norm", r.max_ii_norm},
            {"max_lagrangian_defect", r.max_lagrangian_defect},
            {"max_embedding_defect", r.max_embedding_defect},
            {"max_det_s_error", r.max_det_s_error},
            {"max_lemma2_error", r.max_lemma2_error},
            {"tolerances",
             {{"austere", r.tolerances.austere},
              {"lagrangian", r.tolerances.lagrangian},
              {"embedding", r.tolerances.embedding},
              {"det_s", r.tolerances.det_s},
              {"lemma2", r.tolerances.lemma2}}}};
}

inline nlohmann::json records_json(const AusterityReport& r) {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) points.push_back(to_json(r.points[i], i));
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : r.samples) samples.push_back(to_json(s));
    return {{"points", points}, {"samples", samples}};
}

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string joined(const RVec& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v(i));
    return out;
}

}  // namespace detail

/// One row per (point, normal) sample; vector-valued fields are
/// space-separated inside their column.
inline std::string report_csv(const AusterityReport& r) {
    std::ostringstream out;
    out << "point,u,nu,theta,normal_branch,residuals,lagrangian_defect,embedding_defect,det_s_error,lemma2_error\n";
    for (const auto& s : r.samples) {
        out << s.point << ',' << detail::joined(s.u) << ',' << detail::joined(s.nu) << ',' << detail::fmt(s.theta) << ','
            << (s.normal_branch ? 1 : 0) << ',' << detail::joined(s.residuals) << ','
            << detail::fmt(s.lagrangian_defect) << ',' << detail::fmt(s.embedding_defect) << ','
            << detail::fmt(s.det_s_error) << ',' << (s.lemma2_error ? detail::fmt(*s.lemma2_error) : "") << '\n';
    }
    return out.str();
}

/// Phase curve of one sample over tau in [0, 0.95].
inline std::vector<std::pair<double, double>> phase_curve(const SampleRecord& s, int points = 96) {
    std::vector<std::pair<double, double>> out;
    const double c2 = std::cos(s.theta) * std::cos(s.theta);
    for (int i = 0; i < points; ++i) {
        const double tau = 0.95 * i / (points - 1);
        cplx v = det_or_one(shifted_identity(s.aligned_H, tau));
        if (s.aligned_H.rows() >= 1) v += tau * tau * c2 * det_or_one(shifted_identity(clipped(s.aligned_H), tau));
        out.emplace_back(tau, v.imag());
    }
    return out;
}

/// SVG with the phase curves of the `count` samples of largest residual.
inline std::string phase_plot_svg(const AusterityReport& r, std::size_t count = 5) {
    std::vector<std::size_t> order(r.samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto worst = [&](std::size_t i) {
        const RVec& res = r.samples[i].residuals;
        return res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return worst(a) > worst(b); });
    order.resize(std::min(count, order.size()));

    std::vector<std::vector<std::pair<double, double>>> curves;
    double ymax = 1e-12;
    for (std::size_t i : order) {
        curves.push_back(phase_curve(r.samples[i]));
        for (const auto& [t, y] : curves.back()) ymax = std::max(ymax, std::abs(y));
    }
    const double W = 640, H = 400, pad = 50;
    auto sx = [&](double t) { return pad + (W - 2 * pad) * t / 0.95; };
    auto sy = [&](double y) { return H / 2 - (H / 2 - pad) * y / ymax; };
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"" << pad << "\" y1=\"" << H / 2 << "\" x2=\"" << W - pad << "\" y2=\"" << H / 2
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">tau</text>\n"
        << "<text x=\"" << pad << "\" y=\"" << pad - 10 << "\">Im bracket, |max| = " << detail::fmt(ymax) << "</text>\n"
        << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << r.label << "</text>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        svg << "<polyline fill=\"none\" stroke=\"" << colours[c % 5] << "\" points=\"";
        for (const auto& [t, y] : curves[c]) svg << detail::fmt(sx(t)) << ',' << detail::fmt(sy(y)) << ' ';
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace austere
