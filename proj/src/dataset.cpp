#include "policygrade/dataset.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "policygrade/error.hpp"
#include "policygrade/textprep.hpp"

namespace pg {

namespace {

std::string line_prefix(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

std::optional<LabeledPoint> record_to_point(const nlohmann::json& j) {
    if (!j.is_object()) return std::nullopt;
    const auto point = j.find("point");
    const auto doc = j.find("quoteDoc");
    const auto text = j.find("quoteText");
    if (point == j.end() || text == j.end() || !point->is_string() || !text->is_string()) return std::nullopt;
    LabeledPoint p;
    try {
        p.label = parse_label(point->get<std::string>());
    } catch (const Error&) {
        return std::nullopt;
    }
    p.quote_doc = (doc != j.end() && doc->is_string()) ? doc->get<std::string>() : "";
    p.quote_text = text->get<std::string>();
    if (p.quote_text.empty()) return std::nullopt;
    return p;
}

}  // namespace

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(Errc::invalid_argument, "train fraction must lie strictly between 0 and 1");
}

Dataset parse_dataset(std::string_view ndjson, std::string source) {
    Dataset ds;
    ds.source = std::move(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= ndjson.size()) {
        auto eol = ndjson.find('\n', pos);
        if (eol == std::string_view::npos) eol = ndjson.size();
        std::string_view line = ndjson.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw Error(Errc::parse_error, line_prefix(ds.source, line_no) + "malformed JSON record", line_no);
        for (const char* key : {"point", "quoteDoc", "quoteText"}) {
            if (!j.contains(key) || !j[key].is_string())
                throw Error(Errc::parse_error,
                            line_prefix(ds.source, line_no) + "missing string field \"" + key + "\"", line_no);
        }
        LabeledPoint p;
        const auto label = j["point"].get<std::string>();
        try {
            p.label = parse_label(label);
        } catch (const Error&) {
            throw Error(Errc::parse_error,
                        line_prefix(ds.source, line_no) + "unknown point label \"" + label + "\"", line_no);
        }
        p.quote_doc = j["quoteDoc"].get<std::string>();
        p.quote_text = j["quoteText"].get<std::string>();
        if (p.quote_text.empty())
            throw Error(Errc::parse_error, line_prefix(ds.source, line_no) + "empty quoteText", line_no);
        ds.points.push_back(std::move(p));
    }
    if (ds.points.empty()) throw Error(Errc::parse_error, ds.source + ": dataset contains no points");
    return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open dataset " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dataset(ss.str(), path.string());
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
    for (const auto& p : ds.points) {
        const nlohmann::json j = {
            {"point", to_string(p.label)}, {"quoteDoc", p.quote_doc}, {"quoteText", p.quote_text}};
        out << j.dump() << '\n';
    }
    if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::mt19937_64 gen(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(i, gen));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    if (n < 2) throw Error(Errc::invalid_argument, "splitting needs at least 2 points");
    const auto perm = seeded_permutation(n, spec.seed);
    const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n)));
    SplitIndices out;
    out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, const SplitSpec& spec) {
    const auto idx = split_indices(ds.points.size(), spec);
    Dataset train{{}, ds.source + "#train"};
    Dataset test{{}, ds.source + "#test"};
    for (auto i : idx.train) train.points.push_back(ds.points[i]);
    for (auto i : idx.test) test.points.push_back(ds.points[i]);
    return {std::move(train), std::move(test)};
}

std::vector<HistogramBin> word_histogram(const Dataset& ds, std::size_t bin_width) {
    if (bin_width == 0) throw Error(Errc::invalid_argument, "bin width must be at least 1");
    std::vector<HistogramBin> bins;
    for (const auto& p : ds.points) {
        const std::size_t bin = count_words(p.quote_text) / bin_width;
        while (bins.size() <= bin) bins.push_back({bins.size() * bin_width, 0});
        ++bins[bin].count;
    }
    return bins;
}

Dataset dataset_from_download(std::string_view body, std::string source, std::size_t* skipped) {
    Dataset ds;
    ds.source = std::move(source);
    std::size_t dropped = 0;
    auto take = [&](const nlohmann::json& record) {
        if (auto p = record_to_point(record)) ds.points.push_back(std::move(*p));
        else ++dropped;
    };

    const auto doc = nlohmann::json::parse(body, nullptr, false);
    if (!doc.is_discarded() && (doc.is_array() || doc.is_object())) {
        const nlohmann::json* records = &doc;
        if (doc.is_object()) {
            for (const char* key : {"points", "data", "results"}) {
                if (doc.contains(key) && doc[key].is_array()) {
                    records = &doc[key];
                    break;
                }
            }
        }
        if (records->is_array()) {
            for (const auto& r : *records) take(r);
        } else {
            take(*records);
        }
    } else {
        std::istringstream lines{std::string(body)};
        std::string line;
        while (std::getline(lines, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) ++dropped;
            else take(j);
        }
    }
    if (skipped) *skipped = dropped;
    return ds;
}

}  // namespace pg
