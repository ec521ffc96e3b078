#include "seu/io/csv.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::io {

namespace {

std::string num(double x, int precision) { return fmt::format("{:.{}g}", x, precision); }

}  // namespace

void write_let_curve_csv(std::ostream& out, const let::LetCurve& curve,
                         const let::ConversionSettings* conversion, int precision) {
  out << "energy_MeV,let_MeVcm2_per_mg";
  if (conversion) out << ",charge_pC_per_um";
  out << '\n';
  for (const auto& s : curve.samples) {
    out << num(s.energy, precision) << ',' << num(s.let, precision);
    if (conversion) out << ',' << num(let::let_to_charge_density(s.let, curve.material, *conversion), precision);
    out << '\n';
  }
}

void write_iv_csv(std::ostream& out, std::span<const IvPoint> points, int precision) {
  out << "v_gs,v_ds,i_d\n";
  for (const auto& p : points) {
    out << num(p.v_gs, precision) << ',' << num(p.v_ds, precision) << ',' << num(p.i_d, precision) << '\n';
  }
}

void write_vtc_csv(std::ostream& out, const sram::SnmReport& report, int precision) {
  const auto& a = report.curve_a;
  const auto& b = report.curve_b;
  if (a.size() != b.size()) throw ValidationError("VTC curves have different lengths");
  out << "v_in_V,vtc_a_out_V,vtc_b_out_V\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].in != b[i].in) throw ValidationError("VTC curves use different input grids");
    out << num(a[i].in, precision) << ',' << num(a[i].out, precision) << ',' << num(b[i].out, precision)
        << '\n';
  }
}

std::string snm_summary(const sram::SnmReport& report, int precision) {
  return fmt::format("mode={} snm_V={} lobe1_V={} lobe2_V={}", sram::to_string(report.mode),
                     num(report.snm, precision), num(report.lobe1, precision), num(report.lobe2, precision));
}

void write_critical_let_csv(std::ostream& out, std::span<const sram::CriticalLetResult> results,
                            int precision) {
  out << "scenario,device_type,let_crit_multiple,status\n";
  for (const auto& r : results) {
    out << sram::to_string(r.kind) << ',' << sram::to_string(r.device_type) << ','
        << (r.let_crit ? num(*r.let_crit, precision) : std::string("inf")) << ',' << r.status() << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

}  // namespace seu::io
