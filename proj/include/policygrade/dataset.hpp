#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "policygrade/labels.hpp"

namespace pg {

/// One labeled policy snippet as published by ToS;DR.
struct LabeledPoint {
    Label label = Label::neutral;
    std::string quote_doc;   // e.g. "Privacy Policy"
    std::string quote_text;  // raw, may contain HTML fragments

    friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

struct Dataset {
    std::vector<LabeledPoint> points;
    std::string source;
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Reads newline-delimited JSON records with string keys `point`, `quoteDoc`
/// and `quoteText`; other keys are ignored and blank lines skipped. Errors
/// name the 1-based line number.
Dataset load_dataset(const std::filesystem::path& path);

/// Parses NDJSON text; `source` is used in error messages.
Dataset parse_dataset(std::string_view ndjson, std::string source);

void write_dataset(const Dataset& ds, const std::filesystem::path& path);

/// Uniform integer in [0, bound), bound > 0, by rejection sampling. Unlike
/// std::uniform_int_distribution the result is identical on every platform.
/// `gen` must produce full-range 64-bit values.
template <class Gen>
std::uint64_t uniform_below(std::uint64_t bound, Gen& gen) {
    // 2^64 mod bound: draws below this would bias the low residues.
    const std::uint64_t reject_below = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = gen();
        if (r >= reject_below) return r % bound;
    }
}

/// Seeded Fisher-Yates permutation of 0..n-1 driven by std::mt19937_64(seed)
/// and uniform_below().
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// First floor(train_fraction * n) entries of the seeded permutation go to
/// train, the rest to test.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, const SplitSpec& spec);

struct HistogramBin {
    std::size_t bin_start = 0;
    std::size_t count = 0;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Whitespace word counts of raw quote texts, binned by `bin_width`; empty
/// bins up to the largest observed count are included.
std::vector<HistogramBin> word_histogram(const Dataset& ds, std::size_t bin_width);

/// Lenient conversion of a downloaded JSON document (array of records, an
/// object wrapping one under "points"/"data"/"results", or NDJSON text) into
/// a dataset. Records with missing fields or unknown labels are skipped and
/// counted in `skipped`.
Dataset dataset_from_download(std::string_view body, std::string source, std::size_t* skipped = nullptr);

}  // namespace pg
