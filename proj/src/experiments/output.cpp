#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fdss/version.hpp"

namespace fdss::exp {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string level_column(const std::string& prefix, double level) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0e", level);
    return prefix + "_at_" + buf;
}

nlohmann::ordered_json run_metadata(const std::string& command, const ExperimentConfig& cfg) {
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["version"] = kVersion;
    meta["seed"] = cfg.metric.seed;
    meta["trials"] = cfg.metric.trials;
    meta["nsc"] = cfg.nsc;
    meta["nfft"] = cfg.nfft;
    meta["constellation"] = to_string(cfg.modulation);
    meta["window_family"] = to_string(cfg.window.family);
    meta["shift_policy"] = cfg.shift.describe();
    meta["channel"] = cfg.channel.build().describe();
    return meta;
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<std::filesystem::path> write_outputs(const RunOutput& out, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw NumericError("output: cannot create directory '" + dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    for (const auto& f : out.files) {
        const auto path = dir / f.name;
        const auto tmp = dir / (f.name + ".tmp");
        {
            std::ofstream os(tmp, std::ios::binary);
            os << f.content;
            if (!os) throw NumericError("output: cannot write '" + tmp.string() + "'");
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) throw NumericError("output: cannot rename to '" + path.string() + "': " + ec.message());
        written.push_back(path);
    }
    return written;
}

}  // namespace fdss::exp
