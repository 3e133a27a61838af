#pragma once

#include "spectral_bounds/geometry.hpp"
#include "spectral_bounds/spectra.hpp"
#include "spectral_bounds/verify.hpp"

#include <string>

namespace spb::io {

/// Domain-spec JSON:
///   {"type":"box","dim":2,"lengths":[1,1]}
///   {"type":"disk","radius":1}
///   {"type":"annulus","r_in":1,"r_out":2}
///   {"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}
///   {"type":"curve","builtin":"ellipse","a":2,"b":1}
///   {"type":"curve","samples":[[t,x,y,x',y',x'',y''],...]}
geom::Domain parse_domain(const std::string& json_text);

std::string domain_to_json(const geom::Domain& domain);

std::string summary_to_json(const geom::GeometricSummary& g);

std::string spectrum_to_json(const spectra::Spectrum& s);
spectra::Spectrum parse_spectrum(const std::string& json_text);

std::string report_to_json(const verify::Report& r);
std::string report_to_csv(const verify::Report& r);
std::string report_to_tsv(const verify::Report& r);

}  // namespace spb::io
