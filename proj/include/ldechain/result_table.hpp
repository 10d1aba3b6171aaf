#ifndef LDECHAIN_RESULT_TABLE_HPP
#define LDECHAIN_RESULT_TABLE_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace ldechain {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Rectangular result table with provenance metadata. Serialized either
/// as CSV (leading '#' metadata block, one header row) or JSON.
class ResultTable {
  public:
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void set_meta(const std::string& key, const std::string& value) {
        meta_.emplace_back(key, value);
    }
    void set_meta(const std::string& key, double value) {
        meta_.emplace_back(key, format_double(value));
    }
    void set_meta(const std::string& key, std::int64_t value) {
        meta_.emplace_back(key, std::to_string(value));
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size())
            throw std::invalid_argument("ResultTable: row width mismatch");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    static std::string format_double(double v) {
        std::ostringstream os;
        os << std::setprecision(12) << v;
        return os.str();
    }

    static std::string format_cell(const Cell& c) {
        if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
        if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
        return std::get<std::string>(c);
    }

    void write_csv(std::ostream& os) const {
        for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i)
            os << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
        for (const auto& row : rows_)
            for (std::size_t i = 0; i < row.size(); ++i)
                os << format_cell(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }

    void write_json(std::ostream& os) const {
        nlohmann::json j;
        j["metadata"] = nlohmann::json::object();
        for (const auto& [k, v] : meta_) j["metadata"][k] = v;
        j["columns"] = columns_;
        j["rows"] = nlohmann::json::array();
        for (const auto& row : rows_) {
            nlohmann::json jr = nlohmann::json::array();
            for (const auto& c : row) {
                if (std::holds_alternative<std::int64_t>(c))
                    jr.push_back(std::get<std::int64_t>(c));
                else if (std::holds_alternative<double>(c))
                    jr.push_back(std::get<double>(c));
                else
                    jr.push_back(std::get<std::string>(c));
            }
            j["rows"].push_back(std::move(jr));
        }
        os << j.dump(2) << "\n";
    }

    void write_file(const std::string& path, const std::string& format) const {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("ResultTable: cannot open output file " + path);
        if (format == "csv")
            write_csv(os);
        else if (format == "json")
            write_json(os);
        else
            throw std::invalid_argument("ResultTable: unknown format " + format);
    }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace ldechain

#endif  // LDECHAIN_RESULT_TABLE_HPP
