#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace plpcov::cli {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt("%.6f", *v) : ""; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_csv(std::ostream& os, const Curve& curve) {
  os << kCsvHeader << "\n";
  for (const auto& r : curve.rows)
    os << fmt("%g", r.beta_db) << ',' << cell(r.pc_analytic) << ',' << cell(r.pc_mc) << ','
       << cell(r.ci_lo) << ',' << cell(r.ci_hi) << ',' << cell(r.pc_ppp) << "\n";
}

void write_svg(std::ostream& os, const std::string& title, const std::vector<Curve>& curves) {
  const double w = 640, h = 440, left = 60, right = 170, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  double xmin = 0, xmax = 1;
  bool first = true;
  for (const auto& c : curves)
    for (const auto& r : c.rows) {
      xmin = first ? r.beta_db : std::min(xmin, r.beta_db);
      xmax = first ? r.beta_db : std::max(xmax, r.beta_db);
      first = false;
    }
  if (xmax <= xmin) {
    xmin -= 1;
    xmax += 1;
  }
  auto X = [&](double b) { return left + (b - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double p) { return top + (1.0 - p) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0, y = Y(p);
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
       << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << fmt("%.1f", p) << "</text>\n";
  }
  for (int i = 0; i <= 10; ++i) {
    const double b = xmin + (xmax - xmin) * i / 10.0, x = X(b);
    os << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << fmt("%g", std::round(b * 10) / 10) << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12
     << "\" text-anchor=\"middle\">SIR threshold (dB)</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">coverage probability</text>\n";

  auto polyline = [&](const Curve& c, auto member, const char* color, const char* dash) {
    std::string pts;
    for (const auto& r : c.rows)
      if (const auto& v = r.*member) pts += fmt("%.2f", X(r.beta_db)) + "," + fmt("%.2f", Y(*v)) + " ";
    if (pts.empty()) return;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"" << dash
       << " points=\"" << pts << "\"/>\n";
  };

  double ly = top + 10;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = kColors[i % std::size(kColors)];
    polyline(c, &Row::pc_analytic, color, "");
    polyline(c, &Row::pc_ppp, color, " stroke-dasharray=\"6,4\"");
    for (const auto& r : c.rows) {
      if (!r.pc_mc) continue;
      const double x = X(r.beta_db);
      if (r.ci_lo && r.ci_hi)
        os << "<line x1=\"" << x << "\" y1=\"" << Y(*r.ci_lo) << "\" x2=\"" << x << "\" y2=\""
           << Y(*r.ci_hi) << "\" stroke=\"" << color << "\"/>\n";
      os << "<circle cx=\"" << x << "\" cy=\"" << Y(*r.pc_mc) << "\" r=\"3\" fill=\"none\" stroke=\""
         << color << "\"/>\n";
    }
    const double lx = left + pw + 12;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"/>\n";
    os << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">"
       << escape(c.label.empty() ? "coverage" : c.label) << "</text>\n";
    ly += 18;
  }
  os << "<text x=\"" << left + pw + 12 << "\" y=\"" << ly + 10
     << "\" font-size=\"10\">solid: analytic</text>\n";
  os << "<text x=\"" << left + pw + 12 << "\" y=\"" << ly + 24
     << "\" font-size=\"10\">circles: Monte-Carlo</text>\n";
  os << "<text x=\"" << left + pw + 12 << "\" y=\"" << ly + 38
     << "\" font-size=\"10\">dashed: planar PPP</text>\n";
  os << "</svg>\n";
}

void write_report(std::ostream& os, const ValidationReport& report) {
  os << "check,kind,statistic,p_value,threshold,samples,result,note\n";
  for (const auto& c : report.checks) {
    const char* result = !c.tested ? "skipped" : c.passed ? "pass" : "fail";
    os << csv_field(c.name) << ',' << c.kind << ',' << fmt("%.6g", c.statistic) << ','
       << fmt("%.6g", c.p_value) << ',' << fmt("%.6g", c.threshold) << ',' << c.samples << ','
       << result << ',' << csv_field(c.note) << "\n";
  }
}

std::string suffixed_path(const std::string& path, const std::string& label) {
  const std::filesystem::path p(path);
  auto name = p.stem().string() + "_" + label + p.extension().string();
  return (p.parent_path() / name).string();
}

}  // namespace plpcov::cli
