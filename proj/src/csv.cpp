#include "pirpnn/csv.hpp"

#include <array>
#include <charconv>

namespace pirpnn::csv {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << escape(fields[i]);
  }
  os << '\n';
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index d = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (Eigen::Index k = 1; k <= d; ++k) os << ",u_" << k;
  os << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]);
    for (Eigen::Index k = 0; k < d; ++k) os << ',' << format_double(traj.states[i][k]);
    os << '\n';
  }
}

void write_scan(std::ostream& os, const StabilityScan& scan) {
  os << "re,im,max_abs_s,flag\n";
  for (std::size_t c = 0; c < scan.mesh.size(); ++c) {
    os << format_double(scan.mesh[c].real()) << ',' << format_double(scan.mesh[c].imag()) << ','
       << format_double(scan.max_abs_s[c]) << ',' << scan.flag[c] << '\n';
  }
}

}  // namespace pirpnn::csv
