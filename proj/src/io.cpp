#include "sheathlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sheathlab {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string profile_to_csv(const StationaryProfile& prof) {
  std::string s = "x,n,u,T,phi,phi_x\n";
  for (int j = 0; j < prof.grid.N; ++j) {
    s += format_g17(prof.grid.node(j));
    s += ',';
    s += format_g17(prof.n[j]);
    s += ',';
    s += format_g17(prof.u[j]);
    s += ',';
    s += format_g17(prof.T[j]);
    s += ',';
    s += format_g17(prof.phi[j]);
    s += ',';
    s += format_g17(prof.phi_x[j]);
    s += '\n';
  }
  return s;
}

const char* const kDiagnosticsCsvHeader =
    "t,E_weighted,norm_phi_psi_zeta_h2,norm_sigma,sigma0,sigmax0,E0_boundary";

std::string record_to_csv_row(const DiagnosticRecord& rec) {
  std::string s = format_g17(rec.t);
  for (double val : {rec.e_weighted, rec.norm_h2, rec.norm_sigma, rec.sigma0,
                     rec.sigmax0, rec.e0_boundary}) {
    s += ',';
    s += format_g17(val);
  }
  return s;
}

std::string records_to_csv(std::span<const DiagnosticRecord> records) {
  std::string s = kDiagnosticsCsvHeader;
  s += '\n';
  for (const DiagnosticRecord& r : records) {
    s += record_to_csv_row(r);
    s += '\n';
  }
  return s;
}

std::string records_to_jsonl(std::span<const DiagnosticRecord> records) {
  std::string s;
  for (const DiagnosticRecord& r : records) {
    s += "{\"t\":" + format_g17(r.t);
    s += ",\"E_weighted\":" + format_g17(r.e_weighted);
    s += ",\"norm_phi_psi_zeta_h2\":" + format_g17(r.norm_h2);
    s += ",\"norm_sigma\":" + format_g17(r.norm_sigma);
    s += ",\"sigma0\":" + format_g17(r.sigma0);
    s += ",\"sigmax0\":" + format_g17(r.sigmax0);
    s += ",\"E0_boundary\":" + format_g17(r.e0_boundary);
    s += "}\n";
  }
  return s;
}

DiagnosticCsvWriter::DiagnosticCsvWriter(const std::string& path) : path_(path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kDiagnosticsCsvHeader << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void DiagnosticCsvWriter::append(const DiagnosticRecord& rec) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open for appending: " + path_);
  out << record_to_csv_row(rec) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path_);
}

void DiagnosticCsvWriter::comment(const std::string& text) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open for appending: " + path_);
  out << "# " << text << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path_);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string num2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string ticklabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<PlotSeries>& series, bool log_y) {
  const double W = 960.0, H = 600.0;
  const double ml = 84.0, mr = 24.0, mt = 48.0, mb = 60.0;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      double y = s.y[i];
      if (log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmin == xmax) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymin == ymax) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num2(W) +
         "\" height=\"" + num2(H) + "\" viewBox=\"0 0 " + num2(W) + " " +
         num2(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num2(W / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"17\">" +
         xml_escape(title) + "</text>\n";
  svg += "<rect x=\"" + num2(ml) + "\" y=\"" + num2(mt) + "\" width=\"" +
         num2(pw) + "\" height=\"" + num2(ph) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    const double gx = px(fx), gy = py(fy);
    svg += "<line x1=\"" + num2(gx) + "\" y1=\"" + num2(H - mb) + "\" x2=\"" +
           num2(gx) + "\" y2=\"" + num2(H - mb + 6) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + num2(gx) + "\" y=\"" + num2(H - mb + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" +
           ticklabel(fx) + "</text>\n";
    svg += "<line x1=\"" + num2(ml - 6) + "\" y1=\"" + num2(gy) + "\" x2=\"" +
           num2(ml) + "\" y2=\"" + num2(gy) + "\" stroke=\"#333333\"/>\n";
    const double label = log_y ? std::pow(10.0, fy) : fy;
    svg += "<text x=\"" + num2(ml - 9) + "\" y=\"" + num2(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" +
           ticklabel(label) + "</text>\n";
  }
  svg += "<text x=\"" + num2(ml + pw / 2) + "\" y=\"" + num2(H - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" +
         xml_escape(xlabel) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + num2(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\""
         " transform=\"rotate(-90 20 " +
         num2(mt + ph / 2) + ")\">" + xml_escape(ylabel) + "</text>\n";

  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                        "#9467bd", "#ff7f0e", "#8c564b"};
  const int ncolors = 6;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* color = palette[k % ncolors];
    std::string pts;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      double y = s.y[i];
      if (log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      pts += num2(px(s.x[i])) + "," + num2(py(y)) + " ";
    }
    if (!pts.empty())
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + num2(W - mr - 8) + "\" y=\"" +
           num2(mt + 18.0 + 18.0 * static_cast<double>(k)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\""
           " fill=\"" +
           color + "\">" + xml_escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sheathlab
