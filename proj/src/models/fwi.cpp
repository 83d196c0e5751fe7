#include "casim/models/fwi.hpp"

#include <algorithm>
#include <cmath>

namespace casim::fwi {

void FwiInputs::validate() const {
  if (humidity < 0.0 || humidity > 100.0)
    throw ModelError("fwi: humidity must lie in [0,100]");
  if (rain < 0.0) throw ModelError("fwi: rain must be >= 0");
  if (wind < 0.0) throw ModelError("fwi: wind must be >= 0");
  if (month < 1 || month > 12) throw ModelError("fwi: month must be 1..12");
}

const DayLengthFactors& DayLengthFactors::northern() {
  static const DayLengthFactors tables{
      {6.5, 7.5, 9.0, 12.8, 13.9, 13.9, 12.4, 10.9, 9.4, 8.0, 7.0, 6.0},
      {-1.6, -1.6, -1.6, 0.9, 3.8, 5.8, 6.4, 5.0, 2.4, 0.4, -1.6, -1.6}};
  return tables;
}

double ffmc(double ffmc_prev, const FwiInputs& in) {
  in.validate();
  if (ffmc_prev < 0.0 || ffmc_prev > 101.0)
    throw ModelError("ffmc: previous code must lie in [0,101]");
  const double t = in.temperature, h = in.humidity, w = in.wind;
  double mo = 147.2 * (101.0 - ffmc_prev) / (59.5 + ffmc_prev);
  if (in.rain > 0.5) {
    const double rf = in.rain - 0.5;
    double mr = mo + 42.5 * rf * std::exp(-100.0 / (251.0 - mo)) *
                         (1.0 - std::exp(-6.93 / rf));
    if (mo > 150.0) mr += 0.0015 * (mo - 150.0) * (mo - 150.0) * std::sqrt(rf);
    mo = std::min(mr, 250.0);
  }
  const double ed = 0.942 * std::pow(h, 0.679) +
                    11.0 * std::exp((h - 100.0) / 10.0) +
                    0.18 * (21.1 - t) * (1.0 - std::exp(-0.115 * h));
  double m;
  if (mo > ed) {
    const double ko = 0.424 * (1.0 - std::pow(h / 100.0, 1.7)) +
                      0.0694 * std::sqrt(w) * (1.0 - std::pow(h / 100.0, 8.0));
    const double kd = ko * 0.581 * std::exp(0.0365 * t);
    m = ed + (mo - ed) * std::pow(10.0, -kd);
  } else {
    const double ew = 0.618 * std::pow(h, 0.753) +
                      10.0 * std::exp((h - 100.0) / 10.0) +
                      0.18 * (21.1 - t) * (1.0 - std::exp(-0.115 * h));
    if (mo < ew) {
      const double kl =
          0.424 * (1.0 - std::pow((100.0 - h) / 100.0, 1.7)) +
          0.0694 * std::sqrt(w) * (1.0 - std::pow((100.0 - h) / 100.0, 8.0));
      const double kw = kl * 0.581 * std::exp(0.0365 * t);
      m = ew - (ew - mo) * std::pow(10.0, -kw);
    } else {
      m = mo;
    }
  }
  return std::clamp(59.5 * (250.0 - m) / (147.2 + m), 0.0, 101.0);
}

double dmc(double dmc_prev, const FwiInputs& in, const DayLengthFactors& dl) {
  in.validate();
  if (dmc_prev < 0.0) throw ModelError("dmc: previous code must be >= 0");
  double po = dmc_prev;
  if (in.rain > 1.5) {
    const double re = 0.92 * in.rain - 1.27;
    const double mo = 20.0 + std::exp(5.6348 - po / 43.43);
    double b;
    if (po <= 33.0)
      b = 100.0 / (0.5 + 0.3 * po);
    else if (po <= 65.0)
      b = 14.0 - 1.3 * std::log(po);
    else
      b = 6.2 * std::log(po) - 17.2;
    const double mr = mo + 1000.0 * re / (48.77 + b * re);
    po = std::max(0.0, 244.72 - 43.43 * std::log(mr - 20.0));
  }
  const double t = std::max(in.temperature, -1.1);
  const double k = 1.894 * (t + 1.1) * (100.0 - in.humidity) *
                   dl.dmc_le[static_cast<std::size_t>(in.month - 1)] * 1e-6;
  return po + 100.0 * k;
}

double dc(double dc_prev, const FwiInputs& in, const DayLengthFactors& dl) {
  in.validate();
  if (dc_prev < 0.0) throw ModelError("dc: previous code must be >= 0");
  double dedo = dc_prev;
  if (in.rain > 2.8) {
    const double rd = 0.83 * in.rain - 1.27;
    const double qo = 800.0 * std::exp(-dedo / 400.0);
    const double qr = qo + 3.937 * rd;
    dedo = std::max(0.0, 400.0 * std::log(800.0 / qr));
  }
  const double t = std::max(in.temperature, -2.8);
  const double v = std::max(
      0.0,
      0.36 * (t + 2.8) + dl.dc_lf[static_cast<std::size_t>(in.month - 1)]);
  return dedo + 0.5 * v;
}

double isi(double ffmc_now, double wind_kmh) {
  const double m = 147.2 * (101.0 - ffmc_now) / (59.5 + ffmc_now);
  const double fw = std::exp(0.05039 * wind_kmh);
  const double ff = 91.9 * std::exp(-0.1386 * m) *
                    (1.0 + std::pow(m, 5.31) / 4.93e7);
  return 0.208 * fw * ff;
}

double bui(double dmc_now, double dc_now) {
  const double p = dmc_now, d = dc_now;
  if (p <= 0.0 && d <= 0.0) return 0.0;
  double u;
  if (p <= 0.4 * d)
    u = 0.8 * p * d / (p + 0.4 * d);
  else
    u = p - (1.0 - 0.8 * d / (p + 0.4 * d)) *
                (0.92 + std::pow(0.0114 * p, 1.7));
  return std::max(0.0, u);
}

double fwi(double isi_now, double bui_now) {
  const double u = bui_now;
  const double fd = u <= 80.0
                        ? 0.626 * std::pow(u, 0.809) + 2.0
                        : 1000.0 / (25.0 + 108.64 * std::exp(-0.023 * u));
  const double b = 0.1 * isi_now * fd;
  if (b <= 1.0) return b;
  return std::exp(2.72 * std::pow(0.434 * std::log(b), 0.647));
}

FwiState update(const FwiState& prev, const FwiInputs& in,
                const DayLengthFactors& dl) {
  FwiState next;
  next.ffmc = ffmc(prev.ffmc, in);
  next.dmc = dmc(prev.dmc, in, dl);
  next.dc = dc(prev.dc, in, dl);
  next.isi = isi(next.ffmc, in.wind);
  next.bui = bui(next.dmc, next.dc);
  next.fwi = fwi(next.isi, next.bui);
  return next;
}

Danger classify_danger(double fwi_value) {
  if (fwi_value < 0.0) throw ModelError("classify_danger: negative index");
  if (fwi_value < 5.0) return Danger::Low;
  if (fwi_value < 10.0) return Danger::Moderate;
  if (fwi_value < 20.0) return Danger::High;
  if (fwi_value < 30.0) return Danger::VeryHigh;
  return Danger::Extreme;
}

const char* to_string(Danger d) {
  switch (d) {
    case Danger::Low: return "Low";
    case Danger::Moderate: return "Moderate";
    case Danger::High: return "High";
    case Danger::VeryHigh: return "VeryHigh";
    case Danger::Extreme: return "Extreme";
  }
  return "?";
}

}  // namespace casim::fwi
