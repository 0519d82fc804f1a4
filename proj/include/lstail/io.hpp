#pragma once

#include <string>
#include <vector>

#include "lstail/correction.hpp"
#include "lstail/distribution.hpp"
#include "lstail/extremal.hpp"
#include "lstail/mg1.hpp"
#include "lstail/tailbound.hpp"
#include "lstail/transform.hpp"

namespace lstail::io {

// All JSON documents carry "schema": "v1".  Numbers are printed with %.17g so
// a given configuration reproduces outputs byte for byte.

std::string to_json(const Distribution& d);
Distribution distribution_from_json(const std::string& text);

std::string to_json(const SingularityForm& f);
SingularityForm form_from_json(const std::string& text);

std::string to_json(const CorrectionPair& p);
CorrectionPair pair_from_json(const std::string& text);

std::string to_json(const BoundReport& r);
std::string bound_report_csv(const BoundReport& r);

std::string to_json(const Mg1Report& r);
std::string mg1_csv(const Mg1Report& r);

// Transform samples: "sigma,tau,re,im" rows.
struct TransformSample {
  double sigma, tau;
  cplx value;
};
std::string samples_csv(const std::vector<TransformSample>& samples);
std::vector<TransformSample> samples_from_csv(const std::string& text);

// Grid CSV: "# start=<a> step=<h> n=<count>" header then "t,re,im" rows.
std::string grid_csv(const GridFunction& g);
GridFunction grid_from_csv(const std::string& text);

std::string format_double(double v);

}  // namespace lstail::io
