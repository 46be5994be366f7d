#pragma once

#include <string>
#include <vector>

#include "renewal/asymptotics.hpp"
#include "renewal/engine.hpp"
#include "renewal/intersect.hpp"

namespace renewal::io {

// shortest exact decimal: 17 significant digits
std::string fmt(double v);

// write-to-temp + rename
void write_text_atomic(const std::string& path, const std::string& content);

std::string mass_csv(const MassFunction& mf);                 // n,u,U
std::string model_csv(const IntersectionModel& model);        // n,w,g,G,v,psi_star
std::string report_csv(const AsymptoticReport& rep);          // n,exact,asymptotic,ratio,abs_err,rel_err
std::string classification_json(const Classification& cls);

}  // namespace renewal::io
