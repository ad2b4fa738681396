#include "odicke/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "odicke/cli.hpp"

namespace odicke::io {

using nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

void write_meta_comment(std::ostream& os, const Meta& m) {
  os << "# " << kToolName << ' ' << kToolVersion << " command=" << m.command << '\n';
  os << "# omega=" << format_number(m.params.omega)
     << " kappa=" << format_number(m.params.kappa)
     << " delta_kappa=" << format_number(m.params.delta_kappa)
     << " delta=" << format_number(m.params.delta) << " g_c=" << format_number(m.g_c);
  if (m.has_g) os << " g=" << format_number(m.params.g);
  os << '\n';
}

ordered_json meta_json(const Meta& m) {
  ordered_json params = {{"omega", m.params.omega},
                         {"kappa", m.params.kappa},
                         {"delta_kappa", m.params.delta_kappa},
                         {"delta", m.params.delta}};
  if (m.has_g) params["g"] = m.params.g;
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", m.command},
          {"params", params},
          {"g_c", m.g_c}};
}

std::string cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

} // namespace

void write_sweep_csv(std::ostream& os, const Meta& meta, const SweepDataset& data) {
  write_meta_comment(os, meta);
  os << kSweepHeader << '\n';
  for (const auto& row : data.rows) {
    os << format_number(row.g) << ',' << format_number(row.eps) << ','
       << to_string(row.phase) << ',' << to_string(row.status);
    for (const auto& v : row.values) os << ',' << cell(v);
    os << '\n';
  }
}

void write_sweep_json(std::ostream& os, const Meta& meta, const SweepDataset& data) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : data.rows) {
    ordered_json r = {{"g", row.g},
                      {"eps", row.eps},
                      {"phase", to_string(row.phase)},
                      {"status", to_string(row.status)}};
    for (int c = 0; c < kNumColumns; ++c) {
      const auto& v = row.values[c];
      r[std::string(kColumnNames[c])] = v ? ordered_json(*v) : ordered_json(nullptr);
    }
    if (!row.message.empty()) r["message"] = row.message;
    rows.push_back(std::move(r));
  }
  os << ordered_json{{"meta", meta_json(meta)}, {"rows", rows}}.dump(2) << '\n';
}

void write_report_csv(std::ostream& os, const Meta& meta, const ExponentReport& report) {
  write_meta_comment(os, meta);
  os << "observable,side,kind,exponent,log_amplitude,r_squared,n_points,eps_min,eps_max,note\n";
  for (const auto& c : report.cells) {
    os << c.observable << ',' << to_string(c.side) << ',' << to_string(c.kind) << ',';
    if (c.fit) {
      os << format_number(c.fit->exponent) << ',' << format_number(c.fit->log_amplitude)
         << ',' << format_number(c.fit->r_squared) << ',' << c.fit->n_points << ','
         << format_number(c.fit->window.first) << ',' << format_number(c.fit->window.second);
    } else {
      os << ",,,,,";
    }
    std::string note = c.note;
    for (auto& ch : note) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << ',' << note << '\n';
  }
}

void write_report_json(std::ostream& os, const Meta& meta, const ExponentReport& report) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    ordered_json j = {{"observable", c.observable},
                      {"side", to_string(c.side)},
                      {"kind", to_string(c.kind)}};
    if (c.fit) {
      j["exponent"] = c.fit->exponent;
      j["log_amplitude"] = c.fit->log_amplitude;
      j["r_squared"] = c.fit->r_squared;
      j["n_points"] = c.fit->n_points;
      j["eps_min"] = c.fit->window.first;
      j["eps_max"] = c.fit->window.second;
    }
    j["note"] = c.note;
    cells.push_back(std::move(j));
  }
  os << ordered_json{{"meta", meta_json(meta)}, {"cells", cells}}.dump(2) << '\n';
}

void write_spectrum_csv(std::ostream& os, const Meta& meta, const SweepDataset& data) {
  write_meta_comment(os, meta);
  os << "g,eps,phase,status,adr";
  for (int k = 1; k <= kDim; ++k) os << ",re_" << k << ",im_" << k;
  os << '\n';
  for (const auto& row : data.rows) {
    const bool ok = row.status == RowStatus::Ok;
    os << format_number(row.g) << ',' << format_number(row.eps) << ','
       << to_string(row.phase) << ',' << to_string(row.status) << ','
       << cell(row.values[kAdr]);
    for (const auto& l : row.eigenvalues) {
      os << ',' << (ok ? format_number(l.real()) : "") << ','
         << (ok ? format_number(l.imag()) : "");
    }
    os << '\n';
  }
}

void write_spectrum_json(std::ostream& os, const Meta& meta, const SweepDataset& data) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : data.rows) {
    ordered_json r = {{"g", row.g},
                      {"eps", row.eps},
                      {"phase", to_string(row.phase)},
                      {"status", to_string(row.status)}};
    if (row.status == RowStatus::Ok) {
      r["adr"] = *row.values[kAdr];
      ordered_json ev = ordered_json::array();
      for (const auto& l : row.eigenvalues) ev.push_back({l.real(), l.imag()});
      r["eigenvalues"] = ev;
    }
    rows.push_back(std::move(r));
  }
  os << ordered_json{{"meta", meta_json(meta)}, {"rows", rows}}.dump(2) << '\n';
}

void write_noise_csv(std::ostream& os, const Meta& meta, const NoiseSpectrum<double>& s,
                     bool full) {
  write_meta_comment(os, meta);
  os << "omega";
  for (int i = 1; i <= kDim; ++i) os << ",s" << i << i;
  if (full) {
    for (int i = 1; i <= kDim; ++i)
      for (int j = 1; j <= kDim; ++j) os << ",re_s" << i << j << ",im_s" << i << j;
  }
  os << '\n';
  for (std::size_t k = 0; k < s.omegas.size(); ++k) {
    const auto& m = s.matrices[k];
    os << format_number(s.omegas[k]);
    for (int i = 0; i < kDim; ++i) os << ',' << format_number(m(i, i).real());
    if (full) {
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
          os << ',' << format_number(m(i, j).real()) << ',' << format_number(m(i, j).imag());
    }
    os << '\n';
  }
}

void write_noise_json(std::ostream& os, const Meta& meta, const NoiseSpectrum<double>& s,
                      bool full) {
  ordered_json rows = ordered_json::array();
  for (std::size_t k = 0; k < s.omegas.size(); ++k) {
    const auto& m = s.matrices[k];
    ordered_json diag = ordered_json::array();
    for (int i = 0; i < kDim; ++i) diag.push_back(m(i, i).real());
    ordered_json r = {{"omega", s.omegas[k]}, {"diagonal", diag}};
    if (full) {
      ordered_json re = ordered_json::array(), im = ordered_json::array();
      for (int i = 0; i < kDim; ++i) {
        ordered_json rr = ordered_json::array(), ii = ordered_json::array();
        for (int j = 0; j < kDim; ++j) {
          rr.push_back(m(i, j).real());
          ii.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
      }
      r["re"] = re;
      r["im"] = im;
    }
    rows.push_back(std::move(r));
  }
  os << ordered_json{{"meta", meta_json(meta)}, {"rows", rows}}.dump(2) << '\n';
}

void write_defect(std::ostream& os, const Meta& meta, const DefectReport& r,
                  const SpectrumResult<double>& spectrum, bool json) {
  if (json) {
    ordered_json ev = ordered_json::array();
    for (const auto& l : spectrum.eigenvalues) ev.push_back({l.real(), l.imag()});
    ordered_json j = {{"meta", meta_json(meta)},
                      {"n_slow", r.n_slow},
                      {"rank", r.numerical_rank},
                      {"geometric_multiplicity", r.geometric_multiplicity},
                      {"defective", r.defective},
                      {"eigenvalues", ev}};
    os << j.dump(2) << '\n';
    return;
  }
  write_meta_comment(os, meta);
  os << "n_slow=" << r.n_slow << '\n'
     << "rank=" << r.numerical_rank << '\n'
     << "geometric_multiplicity=" << r.geometric_multiplicity << '\n'
     << "defective=" << (r.defective ? "true" : "false") << '\n';
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    os << "lambda_" << (k + 1) << '=' << format_number(spectrum.eigenvalues[k].real()) << ','
       << format_number(spectrum.eigenvalues[k].imag()) << '\n';
  }
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

} // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_line(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      fields.resize(t.header.size());
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

} // namespace odicke::io
