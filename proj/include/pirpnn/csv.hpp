#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pirpnn/stability.hpp"
#include "pirpnn/stepper.hpp"

namespace pirpnn::csv {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(const std::string& field);

void write_row(std::ostream& os, const std::vector<std::string>& fields);

/// Header `t,u_1,...,u_d`.
void write_trajectory(std::ostream& os, const Trajectory& traj);

/// Header `re,im,max_abs_s,flag`.
void write_scan(std::ostream& os, const StabilityScan& scan);

}  // namespace pirpnn::csv
