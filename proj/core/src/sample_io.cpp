#include "wedge/sample_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wedge/errors.hpp"
#include "wedge/kvconfig.hpp"

namespace wedge {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) { out.push_back(field); }
    if (!line.empty() && line.back() == sep) { out.emplace_back(); }
    return out;
}

std::string trim(std::string text) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) { text.pop_back(); }
    std::size_t k = 0;
    while (k < text.size() && text[k] == ' ') { ++k; }
    return text.substr(k);
}

}  // namespace

std::string format_multi_index(const MultiIndex& index) {
    std::string out;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (k > 0) { out += ';'; }
        out += std::to_string(index[k]);
    }
    return out;
}

MultiIndex parse_multi_index(const std::string& text, int n) {
    MultiIndex index;
    if (!trim(text).empty()) {
        for (const auto& part : split(trim(text), ';')) {
            try {
                std::size_t used = 0;
                const int v = std::stoi(part, &used);
                if (used != part.size() || v < 0) { throw ValidationError(""); }
                index.push_back(v);
            } catch (const std::exception&) {
                throw ValidationError("malformed multi-index '" + text + "'");
            }
        }
    }
    if (index.empty()) { index.assign(static_cast<std::size_t>(n), 0); }
    if (static_cast<int>(index.size()) != n) { throw ValidationError("multi-index '" + text + "' has the wrong length"); }
    return index;
}

std::string samples_to_csv(const std::vector<KernelSample>& samples, const std::vector<std::string>& kinds) {
    if (!kinds.empty() && kinds.size() != samples.size()) { throw ValidationError("one kind per sample required"); }
    const int n = samples.empty() ? 2 : static_cast<int>(samples.front().x.size());
    std::string out;
    for (int i = 1; i <= n; ++i) { out += "x" + std::to_string(i) + ","; }
    for (int i = 1; i <= n; ++i) { out += "y" + std::to_string(i) + ","; }
    out += "t,s,alpha,beta,ds,value";
    if (!kinds.empty()) { out += ",kind"; }
    out += '\n';
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& smp = samples[k];
        if (smp.x.size() != n || smp.y.size() != n) { throw ValidationError("samples of mixed dimension"); }
        for (int i = 0; i < n; ++i) { out += format_double(smp.x[i]) + ","; }
        for (int i = 0; i < n; ++i) { out += format_double(smp.y[i]) + ","; }
        out += format_double(smp.t) + "," + format_double(smp.s) + ",";
        out += format_multi_index(smp.alpha) + "," + format_multi_index(smp.beta) + ",";
        out += std::string(smp.d_s ? "1" : "0") + "," + format_double(smp.value);
        if (!kinds.empty()) { out += "," + kinds[k]; }
        out += '\n';
    }
    return out;
}

SampleCloud samples_from_csv(std::istream& in) {
    SampleCloud cloud;
    std::string line;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') { continue; }
        header = split(line, ',');
        break;
    }
    if (header.empty()) { throw ValidationError("sample file has no header"); }
    int n = 0;
    while (n < static_cast<int>(header.size()) && header[n] == "x" + std::to_string(n + 1)) { ++n; }
    const std::size_t base = 2 * static_cast<std::size_t>(n);
    const std::vector<std::string> tail{"t", "s", "alpha", "beta", "ds", "value"};
    bool ok = n > 0 && header.size() >= base + tail.size();
    for (int i = 0; ok && i < n; ++i) { ok = header[n + i] == "y" + std::to_string(i + 1); }
    for (std::size_t k = 0; ok && k < tail.size(); ++k) { ok = header[base + k] == tail[k]; }
    const bool has_kind = ok && header.size() == base + tail.size() + 1 && header.back() == "kind";
    if (!ok || (header.size() != base + tail.size() && !has_kind)) {
        throw ValidationError("sample file header is not x1..xn,y1..yn,t,s,alpha,beta,ds,value[,kind]");
    }
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') { continue; }
        const auto fields = split(line, ',');
        if (fields.size() != header.size()) {
            throw ValidationError("sample file line " + std::to_string(line_no) + ": wrong number of fields");
        }
        KernelSample smp;
        smp.x.resize(n);
        smp.y.resize(n);
        for (int i = 0; i < n; ++i) {
            smp.x[i] = parse_double(fields[i]);
            smp.y[i] = parse_double(fields[n + i]);
        }
        smp.t = parse_double(fields[base]);
        smp.s = parse_double(fields[base + 1]);
        smp.alpha = parse_multi_index(fields[base + 2], n);
        smp.beta = parse_multi_index(fields[base + 3], n);
        const auto ds = trim(fields[base + 4]);
        if (ds != "0" && ds != "1") { throw ValidationError("ds must be 0 or 1"); }
        smp.d_s = ds == "1";
        smp.value = parse_double(fields[base + 5]);
        cloud.samples.push_back(std::move(smp));
        if (has_kind) { cloud.kinds.push_back(trim(fields.back())); }
    }
    return cloud;
}

SampleCloud load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) { throw ValidationError("cannot open sample file '" + path + "'"); }
    return samples_from_csv(in);
}

}  // namespace wedge
