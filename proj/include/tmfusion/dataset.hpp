#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tmfusion {

using Label = int;
using RowId = std::int64_t;

/// Rows of binary features with integer labels and stable row identifiers.
/// Stored row-major, one byte per bit.
class BinaryDataset {
public:
    BinaryDataset() = default;
    explicit BinaryDataset(std::size_t num_features);
    BinaryDataset(std::vector<std::string> feature_names);

    std::size_t num_features() const { return width_; }
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }

    std::span<const std::uint8_t> row(std::size_t i) const {
        return {bits_.data() + i * width_, width_};
    }
    Label label(std::size_t i) const { return labels_[i]; }
    RowId row_id(std::size_t i) const { return ids_[i]; }

    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<RowId>& row_ids() const { return ids_; }
    const std::vector<std::string>& feature_names() const { return names_; }

    void set_label(std::size_t i, Label y) { labels_[i] = y; }

    /// Appends a row; id defaults to the next unused identifier.
    void add_row(std::span<const std::uint8_t> bits, Label y);
    void add_row(std::span<const std::uint8_t> bits, Label y, RowId id);

    /// Sorted distinct labels.
    std::vector<Label> classes() const;
    std::size_t count(Label y) const;

    /// Rows at the given positions, in that order, keeping their ids.
    BinaryDataset subset(std::span<const std::size_t> positions) const;
    /// Rows whose id is not in `ids`.
    BinaryDataset without_ids(std::span<const RowId> ids) const;
    /// Rows whose label is in `keep`.
    BinaryDataset filter_labels(std::span<const Label> keep) const;

    RowId next_id() const { return next_id_; }

    /// CSV: header of feature names then "label"; cells 0/1; one row per line.
    /// Row ids are positional on read.
    static BinaryDataset read_csv(std::istream& in);
    static BinaryDataset read_csv(const std::filesystem::path& path);
    void write_csv(std::ostream& out) const;
    void write_csv(const std::filesystem::path& path) const;

    bool operator==(const BinaryDataset&) const = default;

private:
    std::size_t width_ = 0;
    std::vector<std::string> names_;
    std::vector<std::uint8_t> bits_;
    std::vector<Label> labels_;
    std::vector<RowId> ids_;
    RowId next_id_ = 0;
};

/// Rows of real-valued features, used before booleanization.
struct NumericTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;

    std::size_t num_features() const { return names.size(); }
    std::size_t size() const { return rows.size(); }

    /// CSV with header; a column named "label" (if present) is read as the label.
    static NumericTable read_csv(std::istream& in);
    static NumericTable read_csv(const std::filesystem::path& path);
};

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace tmfusion
