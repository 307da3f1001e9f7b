#include "policygrade/model_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "policygrade/error.hpp"

namespace pg {

namespace {

constexpr std::string_view kMagic{"PGMODEL\0", 8};

class Writer {
public:
    void u8(std::uint8_t v) { buf_ += static_cast<char>(v); }
    void u32(std::uint32_t v) { le(v, 4); }
    void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v), 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    void bytes(std::string_view s) { buf_.append(s); }
    std::string take() { return std::move(buf_); }

private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_ += static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(le(4))); }
    std::uint64_t u64() { return le(8); }
    double f64() { return std::bit_cast<double>(le(8)); }
    std::string_view bytes(std::uint64_t n) {
        need(n);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    bool done() const noexcept { return pos_ == data_.size(); }

private:
    void need(std::uint64_t n) const {
        if (n > data_.size() - pos_) throw Error(Errc::parse_error, "model artifact is truncated");
    }
    std::uint64_t le(int n) {
        need(static_cast<std::uint64_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
    std::string_view data_;
    std::size_t pos_ = 0;
};

Label label_from_byte(std::uint8_t b) {
    if (b >= kNumLabels) throw Error(Errc::parse_error, "model artifact has an invalid class id");
    return kAllLabels[b];
}

std::string knn_payload(const KnnModel& m) {
    Writer w;
    w.u64(m.points().size());
    for (const auto& p : m.points()) {
        w.u8(static_cast<std::uint8_t>(index_of(p.label)));
        for (double v : p.features) w.f64(v);
    }
    return w.take();
}

std::string nb_payload(const GaussianNbModel& m) {
    Writer w;
    for (const auto& s : m.stats()) {
        w.f64(s.prior);
        for (double v : s.mean) w.f64(v);
        for (double v : s.variance) w.f64(v);
    }
    return w.take();
}

std::string tree_payload(const DecisionTreeModel& m) {
    Writer w;
    w.u64(m.nodes().size());
    for (const auto& n : m.nodes()) {
        w.i32(n.feature);
        w.f64(n.threshold);
        w.i32(n.left);
        w.i32(n.right);
        w.u8(static_cast<std::uint8_t>(index_of(n.label)));
        for (double s : n.scores) w.f64(s);
    }
    return w.take();
}

std::shared_ptr<const Classifier> read_payload(const ModelArtifact& a, std::size_t dim,
                                               std::string_view payload) {
    Reader r(payload);
    std::shared_ptr<const Classifier> model;
    switch (a.kind) {
        case ClassifierKind::knn: {
            const std::uint64_t n = r.u64();
            if (n > payload.size()) throw Error(Errc::parse_error, "model artifact point count is implausible");
            std::vector<Example> points(n);
            for (auto& p : points) {
                p.label = label_from_byte(r.u8());
                p.features.resize(dim);
                for (double& v : p.features) v = r.f64();
            }
            model = std::make_shared<KnnModel>(a.params.k, std::move(points), a.embedder_fingerprint);
            break;
        }
        case ClassifierKind::gaussian_nb: {
            std::array<GaussianClassStats, kNumLabels> stats;
            for (auto& s : stats) {
                s.prior = r.f64();
                s.mean.resize(dim);
                s.variance.resize(dim);
                for (double& v : s.mean) v = r.f64();
                for (double& v : s.variance) v = r.f64();
            }
            model = std::make_shared<GaussianNbModel>(std::move(stats));
            break;
        }
        case ClassifierKind::decision_tree: {
            const std::uint64_t n = r.u64();
            if (n > payload.size()) throw Error(Errc::parse_error, "model artifact node count is implausible");
            std::vector<TreeNode> nodes(n);
            for (auto& node : nodes) {
                node.feature = r.i32();
                node.threshold = r.f64();
                node.left = r.i32();
                node.right = r.i32();
                node.label = label_from_byte(r.u8());
                for (double& s : node.scores) s = r.f64();
            }
            model = std::make_shared<DecisionTreeModel>(dim, std::move(nodes));
            break;
        }
    }
    if (!r.done()) throw Error(Errc::parse_error, "model artifact has trailing payload bytes");
    return model;
}

nlohmann::json params_to_json(const ClassifierParams& p) {
    return {{"k", p.k},
            {"max_depth", p.max_depth},
            {"max_thresholds", p.max_thresholds},
            {"min_samples_split", p.min_samples_split}};
}

ClassifierParams params_from_json(const nlohmann::json& j) {
    ClassifierParams p;
    p.k = j.at("k").get<std::size_t>();
    p.max_depth = j.at("max_depth").get<std::size_t>();
    p.max_thresholds = j.at("max_thresholds").get<std::size_t>();
    p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    return p;
}

}  // namespace

nlohmann::json embedder_to_json(const EmbedderConfig& cfg) {
    return {{"backend", to_string(cfg.backend)},
            {"dimension", cfg.dimension},
            {"ngram_orders", cfg.ngram_orders},
            {"hash_seed", cfg.hash_seed},
            {"endpoint", cfg.external_endpoint}};
}

EmbedderConfig embedder_from_json(const nlohmann::json& j) {
    EmbedderConfig cfg;
    cfg.backend = parse_embedder_backend(j.at("backend").get<std::string>());
    cfg.dimension = j.at("dimension").get<std::size_t>();
    cfg.ngram_orders = j.at("ngram_orders").get<std::set<unsigned>>();
    cfg.hash_seed = j.at("hash_seed").get<std::uint64_t>();
    cfg.external_endpoint = j.value("endpoint", "");
    return cfg;
}

std::string serialize_artifact(const ModelArtifact& a) {
    if (!a.model) throw Error(Errc::model_missing, "artifact has no model");
    if (a.model->kind() != a.kind) throw Error(Errc::invalid_argument, "artifact kind does not match its model");

    nlohmann::json header = {
        {"format_version", ModelArtifact::kFormatVersion},
        {"kind", to_string(a.kind)},
        {"params", params_to_json(a.params)},
        {"embedder", embedder_to_json(a.embedder)},
        {"embedder_fingerprint", a.embedder_fingerprint},
        {"classes", {"good", "neutral", "bad", "blocker"}},
        {"dimension", a.model->dimension()},
        {"metadata", a.metadata},
    };

    std::string payload;
    switch (a.kind) {
        case ClassifierKind::knn: payload = knn_payload(static_cast<const KnnModel&>(*a.model)); break;
        case ClassifierKind::gaussian_nb: payload = nb_payload(static_cast<const GaussianNbModel&>(*a.model)); break;
        case ClassifierKind::decision_tree: payload = tree_payload(static_cast<const DecisionTreeModel&>(*a.model)); break;
    }

    const std::string header_text = header.dump();
    Writer w;
    w.bytes(kMagic);
    w.u32(ModelArtifact::kFormatVersion);
    w.u64(header_text.size());
    w.bytes(header_text);
    w.u64(payload.size());
    w.bytes(payload);
    return w.take();
}

ModelArtifact deserialize_artifact(std::string_view bytes) {
    Reader r(bytes);
    if (r.bytes(kMagic.size()) != kMagic) throw Error(Errc::parse_error, "not a model artifact (bad magic)");
    const std::uint32_t version = r.u32();
    if (version != ModelArtifact::kFormatVersion)
        throw Error(Errc::parse_error, "unsupported model artifact version " + std::to_string(version));
    const auto header_text = r.bytes(r.u64());
    const auto payload = r.bytes(r.u64());
    if (!r.done()) throw Error(Errc::parse_error, "model artifact has trailing bytes");

    ModelArtifact a;
    std::size_t dim = 0;
    try {
        const auto header = nlohmann::json::parse(header_text);
        if (header.at("format_version").get<std::uint32_t>() != version)
            throw Error(Errc::parse_error, "model artifact header version disagrees with preamble");
        if (header.at("classes") != nlohmann::json({"good", "neutral", "bad", "blocker"}))
            throw Error(Errc::parse_error, "model artifact has an unexpected class list");
        a.kind = parse_classifier_kind(header.at("kind").get<std::string>());
        a.params = params_from_json(header.at("params"));
        a.embedder = embedder_from_json(header.at("embedder"));
        a.embedder_fingerprint = header.at("embedder_fingerprint").get<std::string>();
        a.metadata = header.at("metadata");
        dim = header.at("dimension").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("model artifact header: ") + e.what());
    }
    if (a.embedder_fingerprint != a.embedder.fingerprint())
        throw Error(Errc::fingerprint_mismatch, "model artifact fingerprint \"" + a.embedder_fingerprint +
                                                    "\" does not match its embedder settings");
    if (dim != a.embedder.dimension)
        throw Error(Errc::dimension_mismatch, "model dimension differs from its embedder dimension");
    a.model = read_payload(a, dim, payload);
    return a;
}

void write_artifact(const ModelArtifact& artifact, const std::filesystem::path& path) {
    const std::string bytes = serialize_artifact(artifact);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

ModelArtifact read_artifact(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open model artifact " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_artifact(ss.str());
}

}  // namespace pg
