#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gasflow/common.hpp"

namespace gasflow {

using json = nlohmann::json;

inline void ensure_parent_dir(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

// CSV with a header row, LF line endings and fixed 17-significant-digit floats,
// so identical runs produce byte-identical files.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) {
        ensure_parent_dir(path);
        out_.open(path, std::ios::binary);
        if (!out_) throw ValidationError("cannot open output file: " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        width_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != width_) throw ValidationError("csv row width mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    }

    void row_text(const std::vector<std::string>& values) {
        if (values.size() != width_) throw ValidationError("csv row width mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << values[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
    std::size_t width_ = 0;
};

// JSON serialization with the same fixed float formatting. Objects keep
// nlohmann's sorted-key order, so the byte stream is reproducible.
namespace io_detail {
inline void dump_json(const json& j, std::string& out, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::null: out += "null"; break;
        case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case json::value_t::number_float: out += format_double(j.get<double>()); break;
        case json::value_t::string: out += json(j.get<std::string>()).dump(); break;
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_json(j[i], out, indent + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                out += pad_in + json(it.key()).dump() + ": ";
                dump_json(it.value(), out, indent + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            break;
        }
        default: out += "null"; break;
    }
}
}  // namespace io_detail

inline std::string dump_json(const json& j) {
    std::string out;
    io_detail::dump_json(j, out, 0);
    out += '\n';
    return out;
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    ensure_parent_dir(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    out << dump_json(j);
}

// ---- SVG phase portraits ----------------------------------------------------

struct SvgPolyline {
    std::vector<std::pair<double, double>> pts;
    std::string color = "#1f77b4";
};

struct SvgMarker {
    double x = 0, y = 0;
    std::string label;
    std::string color = "#d62728";
};

// Fixed 800x600 canvas: trajectories as polylines, equilibria as labelled
// circles. A decorative companion to the CSV ground truth.
inline void write_svg_portrait(const std::filesystem::path& path,
                               const std::vector<SvgPolyline>& lines,
                               const std::vector<SvgMarker>& markers,
                               const std::string& xlabel = "",
                               const std::string& ylabel = "") {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto grow = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const auto& l : lines)
        for (const auto& p : l.pts) grow(p.first, p.second);
    for (const auto& m : markers) grow(m.x, m.y);
    if (!(xmax > xmin)) {
        xmin -= 1;
        xmax += 1;
    }
    if (!(ymax > ymin)) {
        ymin -= 1;
        ymax += 1;
    }
    double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;

    const double W = 800, H = 600, ml = 60, mr = 20, mt = 20, mb = 50;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto sy = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    ensure_parent_dir(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "width=\"800\" height=\"600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << format_double(ml) << "\" y1=\"" << format_double(H - mb)
        << "\" x2=\"" << format_double(W - mr) << "\" y2=\"" << format_double(H - mb)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << format_double(ml) << "\" y1=\"" << format_double(mt)
        << "\" x2=\"" << format_double(ml) << "\" y2=\"" << format_double(H - mb)
        << "\" stroke=\"black\"/>\n";
    if (!xlabel.empty())
        out << "<text x=\"" << format_double(0.5 * W) << "\" y=\""
            << format_double(H - 12) << "\" text-anchor=\"middle\" font-size=\"16\">"
            << xlabel << "</text>\n";
    if (!ylabel.empty())
        out << "<text x=\"18\" y=\"" << format_double(0.5 * H)
            << "\" text-anchor=\"middle\" font-size=\"16\" transform=\"rotate(-90 18 "
            << format_double(0.5 * H) << ")\">" << ylabel << "</text>\n";
    for (const auto& l : lines) {
        if (l.pts.size() < 2) continue;
        out << "<polyline fill=\"none\" stroke=\"" << l.color
            << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < l.pts.size(); ++i) {
            if (i) out << ' ';
            out << format_double(sx(l.pts[i].first)) << ','
                << format_double(sy(l.pts[i].second));
        }
        out << "\"/>\n";
    }
    for (const auto& m : markers) {
        out << "<circle cx=\"" << format_double(sx(m.x)) << "\" cy=\""
            << format_double(sy(m.y)) << "\" r=\"5\" fill=\"" << m.color << "\"/>\n";
        if (!m.label.empty())
            out << "<text x=\"" << format_double(sx(m.x) + 8) << "\" y=\""
                << format_double(sy(m.y) - 8) << "\" font-size=\"14\">" << m.label
                << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace gasflow
