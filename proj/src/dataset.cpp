#include "tmfusion/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tmfusion/errors.hpp"

namespace tmfusion {

namespace {

// Cells may be double-quoted; a doubled quote inside stands for one quote.
std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch != '"') {
                cells.back() += ch;
            } else if (i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else {
                quoted = false;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.emplace_back();
        } else {
            cells.back() += ch;
        }
    }
    if (quoted) throw FormatError("unterminated quote in CSV line");
    return cells;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

Label parse_label(const std::string& cell, std::size_t line_no) {
    try {
        std::size_t used = 0;
        int v = std::stoi(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line_no) + ": label '" + cell +
                          "' is not an integer");
    }
}

}  // namespace

BinaryDataset::BinaryDataset(std::size_t num_features)
    : width_(num_features), names_(default_names(num_features)) {}

BinaryDataset::BinaryDataset(std::vector<std::string> feature_names)
    : width_(feature_names.size()), names_(std::move(feature_names)) {}

void BinaryDataset::add_row(std::span<const std::uint8_t> bits, Label y) {
    add_row(bits, y, next_id_);
}

void BinaryDataset::add_row(std::span<const std::uint8_t> bits, Label y, RowId id) {
    if (bits.size() != width_) {
        throw DimensionError("row has " + std::to_string(bits.size()) + " features, expected " +
                             std::to_string(width_));
    }
    for (auto b : bits) bits_.push_back(b ? 1 : 0);
    labels_.push_back(y);
    ids_.push_back(id);
    next_id_ = std::max(next_id_, id + 1);
}

std::vector<Label> BinaryDataset::classes() const {
    std::set<Label> s(labels_.begin(), labels_.end());
    return {s.begin(), s.end()};
}

std::size_t BinaryDataset::count(Label y) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
}

BinaryDataset BinaryDataset::subset(std::span<const std::size_t> positions) const {
    BinaryDataset out(names_);
    out.bits_.reserve(positions.size() * width_);
    for (auto p : positions) out.add_row(row(p), labels_[p], ids_[p]);
    out.next_id_ = std::max(out.next_id_, next_id_);
    return out;
}

BinaryDataset BinaryDataset::without_ids(std::span<const RowId> ids) const {
    std::unordered_set<RowId> drop(ids.begin(), ids.end());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < size(); ++i)
        if (!drop.contains(ids_[i])) keep.push_back(i);
    return subset(keep);
}

BinaryDataset BinaryDataset::filter_labels(std::span<const Label> keep_labels) const {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < size(); ++i)
        if (std::find(keep_labels.begin(), keep_labels.end(), labels_[i]) != keep_labels.end())
            keep.push_back(i);
    return subset(keep);
}

BinaryDataset BinaryDataset::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("dataset CSV is empty");
    auto header = split_csv_line(line);
    if (header.empty() || header.back() != "label")
        throw FormatError("dataset CSV header must end with a 'label' column");
    header.pop_back();
    BinaryDataset d(header);
    std::vector<std::uint8_t> bits(d.width_);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != d.width_ + 1) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(d.width_ + 1) + " cells, got " +
                              std::to_string(cells.size()));
        }
        for (std::size_t k = 0; k < d.width_; ++k) {
            if (cells[k] == "0") bits[k] = 0;
            else if (cells[k] == "1") bits[k] = 1;
            else throw FormatError("line " + std::to_string(line_no) + ": feature '" +
                                   d.names_[k] + "' is not 0/1");
        }
        d.add_row(bits, parse_label(cells.back(), line_no));
    }
    return d;
}

BinaryDataset BinaryDataset::read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open dataset " + path.string());
    return read_csv(in);
}

void BinaryDataset::write_csv(std::ostream& out) const {
    for (const auto& n : names_) out << csv_cell(n) << ',';
    out << "label\n";
    for (std::size_t i = 0; i < size(); ++i) {
        for (auto b : row(i)) out << (b ? '1' : '0') << ',';
        out << labels_[i] << '\n';
    }
}

void BinaryDataset::write_csv(const std::filesystem::path& path) const {
    std::ostringstream ss;
    write_csv(ss);
    write_file_atomic(path, ss.str());
}

NumericTable NumericTable::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("numeric CSV is empty");
    auto header = split_csv_line(line);
    NumericTable t;
    std::ptrdiff_t label_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "label") label_col = static_cast<std::ptrdiff_t>(i);
        else t.names.push_back(header[i]);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError("line " + std::to_string(line_no) + ": wrong cell count");
        std::vector<double> row;
        row.reserve(t.names.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<std::ptrdiff_t>(i) == label_col) {
                t.labels.push_back(parse_label(cells[i], line_no));
                continue;
            }
            try {
                row.push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw FormatError("line " + std::to_string(line_no) + ": '" + cells[i] +
                                  "' is not a number");
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

NumericTable NumericTable::read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open table " + path.string());
    return read_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw FormatError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace tmfusion
