// Textual model descriptors: `name` or `name(key=value,...)`.
//   bayes | em | sm
//   fs(alpha=0.25)
//   dsr(kind=slow,c=1)            c defaults to 1
//   fsgrid(alphas=0:0.1:1)        start:step:end, endpoints included
//   rl(tau=fat,theta=0.5)         tau in {fat, geom}; geom needs alpha=
//   pd(alpha=0.3) | pd(schedule=dec)
//   ks(kalpha=0.3,alpha=0.1)      or interp=sm | interp=rl with theta=
#pragma once

#include <string>

#include "eswitch/models.hpp"

namespace eswitch {

// Parses and constructs; throws std::invalid_argument with the offending
// descriptor on any syntax or parameter error.
Model parse_model(const std::string& descriptor, int k);

// The range syntax used by fsgrid: "start:step:end" or a single number.
std::vector<double> parse_range(const std::string& text);

}  // namespace eswitch
