#pragma once

// KernelSample clouds as CSV:  x1..xn,y1..yn,t,s,alpha,beta,ds,value[,kind].
// Multi-indices are written as ';'-separated orders, e.g. "2;0".  Lines
// starting with '#' are comments.

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "wedge/kernel.hpp"

namespace wedge {

std::string format_multi_index(const MultiIndex& index);
MultiIndex parse_multi_index(const std::string& text, int n);

/// Header plus one row per sample; `kinds` (if non-empty) fills an extra column.
std::string samples_to_csv(const std::vector<KernelSample>& samples, const std::vector<std::string>& kinds = {});

struct SampleCloud {
    std::vector<KernelSample> samples;
    std::vector<std::string> kinds; // empty when the file has no kind column
};

SampleCloud samples_from_csv(std::istream& in);
SampleCloud load_samples(const std::string& path);

}  // namespace wedge
