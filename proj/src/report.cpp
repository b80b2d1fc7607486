#include "mimic/report.hpp"

#include <algorithm>
#include <sstream>

#include "mimic/errors.hpp"
#include "mimic/text_io.hpp"

namespace mimic {

std::string loss_history_csv(const std::vector<EpochStats>& history) {
    std::ostringstream out;
    out << "epoch,train_loss,test_loss,test_mse\n";
    for (const auto& e : history)
        out << e.epoch << "," << format_double(e.train_loss) << ","
            << format_double(e.test_loss) << "," << format_double(e.test_mse) << "\n";
    return out.str();
}

std::string per_sample_csv(const std::vector<SampleReport>& rows) {
    std::ostringstream out;
    out << "index,servo_mae,servo_mse,landmark_distance,image_similarity,pixel_distance\n";
    for (const auto& r : rows) {
        out << r.index << "," << format_double(r.servo_mae) << ","
            << format_double(r.servo_mse) << ",";
        if (r.landmark_dist >= 0.0) out << format_double(r.landmark_dist);
        out << ",";
        if (r.image_sim >= 0.0) out << format_double(r.image_sim);
        out << ",";
        if (r.pixel_dist >= 0.0) out << format_double(r.pixel_dist);
        out << "\n";
    }
    return out.str();
}

std::string summary_csv(const SummaryReport& s) {
    std::ostringstream out;
    out << "samples,mean_servo_mae,mean_servo_mse,mean_landmark_distance,"
           "mean_image_similarity,mean_pixel_distance,gs,gt,gd\n";
    out << s.samples << "," << format_double(s.mean_servo_mae) << ","
        << format_double(s.mean_servo_mse) << "," << format_double(s.mean_landmark_dist)
        << "," << format_double(s.mean_image_sim) << ","
        << format_double(s.mean_pixel_dist) << "," << format_double(s.gs) << ","
        << format_double(s.gt) << "," << format_double(s.gd) << "\n";
    return out.str();
}

std::string ced_csv(const std::vector<std::pair<std::string, CedCurve>>& curves) {
    if (curves.empty()) throw ArgumentError("ced_csv: no curves");
    const std::size_t n = curves.front().second.thresholds.size();
    for (const auto& [name, c] : curves) {
        (void)name;
        if (c.thresholds.size() != n || c.fractions.size() != n)
            throw DimensionError("ced_csv: curves must share one threshold grid");
    }
    std::ostringstream out;
    out << "threshold";
    for (const auto& [name, c] : curves) {
        (void)c;
        out << "," << name;
    }
    out << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << format_double(curves.front().second.thresholds[i]);
        for (const auto& [name, c] : curves) {
            (void)name;
            out << "," << format_double(c.fractions[i]);
        }
        out << "\n";
    }
    return out.str();
}

namespace {

const char* kCurveColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b"};

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

std::string ced_svg(const std::vector<std::pair<std::string, CedCurve>>& curves) {
    if (curves.empty()) throw ArgumentError("ced_svg: no curves");
    constexpr int W = 640, H = 480;
    constexpr double ml = 60, mr = 20, mt = 30, mb = 50;  // margins
    const double pw = W - ml - mr, ph = H - mt - mb;

    double tmax = 0.0;
    for (const auto& [name, c] : curves) {
        (void)name;
        if (!c.thresholds.empty()) tmax = std::max(tmax, c.thresholds.back());
    }
    if (tmax <= 0.0) tmax = 1.0;

    auto sx = [&](double t) { return ml + pw * t / tmax; };
    auto sy = [&](double f) { return mt + ph * (1.0 - f); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // grid + axis labels
    for (int i = 0; i <= 5; ++i) {
        const double f = i / 5.0;
        out << "<line x1=\"" << ml << "\" y1=\"" << sy(f) << "\" x2=\"" << (W - mr)
            << "\" y2=\"" << sy(f) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << (ml - 8) << "\" y=\"" << (sy(f) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt3(f) << "</text>\n";
        const double t = tmax * f;
        out << "<line x1=\"" << sx(t) << "\" y1=\"" << mt << "\" x2=\"" << sx(t)
            << "\" y2=\"" << (H - mb) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << sx(t) << "\" y=\"" << (H - mb + 18)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt3(t) << "</text>\n";
    }
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << (H - mb) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << (H - mb) << "\" x2=\"" << (W - mr)
        << "\" y2=\"" << (H - mb) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (W / 2) << "\" y=\"" << (H - 12)
        << "\" font-size=\"13\" text-anchor=\"middle\">mean per-servo absolute error"
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (H / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (H / 2) << ")\">fraction of samples</text>\n";

    int ci = 0;
    for (const auto& [name, c] : curves) {
        const char* color = kCurveColors[ci % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < c.thresholds.size(); ++i)
            out << sx(c.thresholds[i]) << "," << sy(c.fractions[i]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << (ml + 12) << "\" y=\"" << (mt + 16 + 16 * ci)
            << "\" font-size=\"12\" fill=\"" << color << "\">" << name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace mimic
