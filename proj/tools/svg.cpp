#include "svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cohjm {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

SvgPlot::SvgPlot(double x0, double x1, double y0, double y1, int width, int height)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), w_(width), h_(height) {}

double SvgPlot::sx(double x) const { return kMargin + (x - x0_) / (x1_ - x0_) * (w_ - 2 * kMargin); }
double SvgPlot::sy(double y) const { return h_ - kMargin - (y - y0_) / (y1_ - y0_) * (h_ - 2 * kMargin); }

void SvgPlot::polyline(const std::vector<Pt>& pts, const std::string& stroke, double width,
                       const std::string& dash) {
  if (pts.empty()) return;
  body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"";
  if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
  body_ << " points=\"";
  for (const auto& [x, y] : pts) body_ << num(sx(x)) << ',' << num(sy(y)) << ' ';
  body_ << "\"/>\n";
}

void SvgPlot::polygon(const std::vector<Pt>& pts, const std::string& fill, double opacity) {
  if (pts.size() < 3) return;
  body_ << "<polygon stroke=\"none\" fill=\"" << fill << "\" fill-opacity=\"" << opacity << "\" points=\"";
  for (const auto& [x, y] : pts) body_ << num(sx(x)) << ',' << num(sy(y)) << ' ';
  body_ << "\"/>\n";
}

void SvgPlot::rect(double x0, double y0, double x1, double y1, const std::string& fill, double opacity) {
  polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, fill, opacity);
}

void SvgPlot::dot(Pt p, const std::string& fill, double r) {
  body_ << "<circle cx=\"" << num(sx(p.first)) << "\" cy=\"" << num(sy(p.second)) << "\" r=\"" << r
        << "\" fill=\"" << fill << "\"/>\n";
}

void SvgPlot::label(Pt p, const std::string& text, int size) {
  body_ << "<text x=\"" << num(sx(p.first)) << "\" y=\"" << num(sy(p.second)) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\">" << escape(text) << "</text>\n";
}

void SvgPlot::axes(const std::string& xlabel, const std::string& ylabel, int ticks) {
  body_ << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w_ - 2 * kMargin
        << "\" height=\"" << h_ - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= ticks; ++i) {
    const double x = x0_ + (x1_ - x0_) * i / ticks;
    const double y = y0_ + (y1_ - y0_) * i / ticks;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    body_ << "<text x=\"" << num(sx(x)) << "\" y=\"" << h_ - kMargin + 16
          << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%g", y);
    body_ << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(sy(y) + 4)
          << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << buf << "</text>\n";
  }
  body_ << "<text x=\"" << w_ / 2 << "\" y=\"" << h_ - 12
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">" << escape(xlabel)
        << "</text>\n";
  body_ << "<text x=\"14\" y=\"" << h_ / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << h_ / 2 << ")\" font-family=\"sans-serif\">" << escape(ylabel) << "</text>\n";
}

void SvgPlot::title(const std::string& text) {
  body_ << "<text x=\"" << w_ / 2 << "\" y=\"" << kMargin - 16
        << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">" << escape(text) << "</text>\n";
}

std::string SvgPlot::str() const {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
    << w_ << ' ' << h_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << body_.str() << "</svg>\n";
  return s.str();
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << str();
}

}  // namespace cohjm
