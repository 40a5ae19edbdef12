#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fdss/experiments.hpp"

namespace fdss::exp {

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    /// Cells are preformatted; an empty string leaves the cell blank.
    void add_row(std::vector<std::string> cells);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// JSON metadata block shared by every command.
nlohmann::ordered_json run_metadata(const std::string& command, const ExperimentConfig& cfg);

std::string dump_json(const nlohmann::ordered_json& j);

/// Column name for a CCDF level, e.g. papr_db_at_1e-03.
std::string level_column(const std::string& prefix, double level);

}  // namespace fdss::exp
