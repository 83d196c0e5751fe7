#pragma once

#include <array>

#include "casim/errors.hpp"

namespace casim::fwi {

// One day's noon weather observations for a site.
struct FwiInputs {
  double temperature = 20.0;  // deg C
  double humidity = 40.0;     // percent relative, [0,100]
  double wind = 10.0;         // km/h
  double rain = 0.0;          // mm over the past 24h
  int month = 7;              // 1..12
  void validate() const;
};

// Carried-over moisture codes plus the derived indexes for one site.
// Start-up values are the standard system defaults.
struct FwiState {
  double ffmc = 85.0;  // F, [0,101]
  double dmc = 6.0;    // P
  double dc = 15.0;    // D
  double isi = 0.0;    // R
  double bui = 0.0;    // U
  double fwi = 0.0;    // S
};

// Monthly day-length factors (northern hemisphere standard tables).
struct DayLengthFactors {
  std::array<double, 12> dmc_le;
  std::array<double, 12> dc_lf;
  static const DayLengthFactors& northern();
};

// Daily update equations. The source transcription this project worked from
// carried typographic defects (a DMC 'b' coefficient printed as 13 instead
// of 1.3, an unparenthesized 100/(0.5+0.3*Po), duplicated FFMC rain lines
// without their m_o<=150 branch, and an ISI wind constant of 0.0811); the
// canonical Van Wagner system coefficients are used throughout.
double ffmc(double ffmc_prev, const FwiInputs& in);
double dmc(double dmc_prev, const FwiInputs& in,
           const DayLengthFactors& dl = DayLengthFactors::northern());
double dc(double dc_prev, const FwiInputs& in,
          const DayLengthFactors& dl = DayLengthFactors::northern());
double isi(double ffmc_now, double wind_kmh);
double bui(double dmc_now, double dc_now);
double fwi(double isi_now, double bui_now);

// All six blocks for one day.
FwiState update(const FwiState& prev, const FwiInputs& in,
                const DayLengthFactors& dl = DayLengthFactors::northern());

enum class Danger { Low, Moderate, High, VeryHigh, Extreme };

// 0-5 Low, 5-10 Moderate, 10-20 High, 20-30 Very high, 30+ Extreme;
// boundary values land in the upper class.
Danger classify_danger(double fwi_value);
const char* to_string(Danger d);

}  // namespace casim::fwi
