#pragma once

// Minimal SVG plot: data coordinates mapped into a framed panel.

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cohjm {

using Pt = std::pair<double, double>;

class SvgPlot {
 public:
  SvgPlot(double x0, double x1, double y0, double y1, int width = 560, int height = 420);

  void polyline(const std::vector<Pt>& pts, const std::string& stroke, double width = 1.5,
                const std::string& dash = "");
  void polygon(const std::vector<Pt>& pts, const std::string& fill, double opacity);
  void rect(double x0, double y0, double x1, double y1, const std::string& fill, double opacity);
  void dot(Pt p, const std::string& fill, double r = 3.0);
  void label(Pt p, const std::string& text, int size = 12);
  void axes(const std::string& xlabel, const std::string& ylabel, int ticks = 5);
  void title(const std::string& text);

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double x0_, x1_, y0_, y1_;
  int w_, h_;
  static constexpr int kMargin = 50;
  std::ostringstream body_;

  double sx(double x) const;
  double sy(double y) const;
};

}  // namespace cohjm
