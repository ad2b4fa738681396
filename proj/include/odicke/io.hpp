#ifndef ODICKE_IO_HPP
#define ODICKE_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "odicke/scaling.hpp"
#include "odicke/spectral.hpp"
#include "odicke/steady.hpp"

namespace odicke::io {

/// 17 significant digits, scientific.
std::string format_number(double x);

struct Meta {
  std::string command;
  ModelParamsd params;  // resolved; g is the evaluated coupling when relevant
  double g_c = 0;
  bool has_g = false;
};

inline constexpr std::string_view kSweepHeader =
    "g,eps,phase,status,adr,im_lambda_plus,dn1,dn2,dnb,purity,xx1,pp1,xp1,xx2,pp2,xp2,xxb,"
    "ppb,xpb";

void write_sweep_csv(std::ostream& os, const Meta& meta, const SweepDataset& data);
void write_sweep_json(std::ostream& os, const Meta& meta, const SweepDataset& data);

void write_report_csv(std::ostream& os, const Meta& meta, const ExponentReport& report);
void write_report_json(std::ostream& os, const Meta& meta, const ExponentReport& report);

void write_spectrum_csv(std::ostream& os, const Meta& meta, const SweepDataset& data);
void write_spectrum_json(std::ostream& os, const Meta& meta, const SweepDataset& data);

void write_noise_csv(std::ostream& os, const Meta& meta, const NoiseSpectrum<double>& s,
                     bool full);
void write_noise_json(std::ostream& os, const Meta& meta, const NoiseSpectrum<double>& s,
                      bool full);

void write_defect(std::ostream& os, const Meta& meta, const DefectReport& r,
                  const SpectrumResult<double>& spectrum, bool json);

/// A CSV table with '#' comment lines skipped; empty cells kept as "".
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;
};

CsvTable read_csv(std::istream& is);

} // namespace odicke::io

#endif // ODICKE_IO_HPP
