#include "narrowcap/render_svg.hpp"

#include <cmath>
#include <cstdio>

namespace narrowcap {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const std::vector<std::pair<PointCloud, int>>& clouds,
                       const RenderSpec& spec, const Network* net) {
    if (clouds.empty()) throw std::invalid_argument("render_svg: no clouds");
    for (const auto& [cloud, cls] : clouds) {
        (void)cls;
        if (cloud.dim != 2) throw std::invalid_argument("render_svg: clouds must be 2-D");
    }
    if (spec.width_px <= 0 || spec.height_px <= 0 || spec.decision_grid < 2)
        throw std::invalid_argument("render_svg: invalid spec");
    if (!(spec.xmax > spec.xmin) || !(spec.ymax > spec.ymin))
        throw std::invalid_argument("render_svg: empty view box");
    if (net && (net->input_dim() != 2 || net->output_dim() != 1))
        throw std::invalid_argument("render_svg: decision network must map R^2 -> R");

    const double sx = spec.width_px / (spec.xmax - spec.xmin);
    const double sy = spec.height_px / (spec.ymax - spec.ymin);
    auto px = [&](double x) { return (x - spec.xmin) * sx; };
    auto py = [&](double y) { return spec.height_px - (y - spec.ymin) * sy; };
    auto color_of = [&](int cls) {
        return spec.class_colors[static_cast<std::size_t>(cls) % spec.class_colors.size()];
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(spec.width_px) + "\" height=\"" + std::to_string(spec.height_px) +
           "\" viewBox=\"0 0 " + std::to_string(spec.width_px) + " " +
           std::to_string(spec.height_px) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    if (net) {
        // Shade each grid cell by the thresholded network value at its center.
        const int g = spec.decision_grid;
        const double cw = (spec.xmax - spec.xmin) / g;
        const double ch = (spec.ymax - spec.ymin) / g;
        out += "<g opacity=\"0.25\">\n";
        for (int iy = 0; iy < g; ++iy) {
            for (int ix = 0; ix < g; ++ix) {
                const double cx = spec.xmin + (ix + 0.5) * cw;
                const double cy = spec.ymin + (iy + 0.5) * ch;
                const bool hi = net->forward({cx, cy})[0] >= spec.decision_midpoint;
                out += "<rect x=\"" + fmt(px(spec.xmin + ix * cw)) + "\" y=\"" +
                       fmt(py(spec.ymin + (iy + 1) * ch)) + "\" width=\"" + fmt(cw * sx) +
                       "\" height=\"" + fmt(ch * sy) + "\" fill=\"" + color_of(hi ? 1 : 0) +
                       "\"/>\n";
            }
        }
        out += "</g>\n";
    }

    for (const auto& [cloud, cls] : clouds) {
        out += "<g fill=\"" + color_of(cls) + "\">\n";
        for (const auto& p : cloud.points)
            out += "<circle cx=\"" + fmt(px(p[0])) + "\" cy=\"" + fmt(py(p[1])) + "\" r=\"" +
                   fmt(spec.point_radius) + "\"/>\n";
        out += "</g>\n";
    }

    if (!spec.title.empty())
        out += "<text x=\"" + fmt(spec.width_px / 2.0) +
               "\" y=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"14\">" +
               escape_xml(spec.title) + "</text>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace narrowcap
