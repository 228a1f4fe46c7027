#pragma once

// JSON / JSON Lines formats for every domain type, plus the directory
// layout used to look up embedding and similarity-matrix files.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "semncg/tokenize.hpp"
#include "semncg/types.hpp"

namespace semncg {

using json = nlohmann::ordered_json;

// Shortest decimal form that round-trips. Used for CSV cells so reports are
// byte-stable across runs.
inline std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw format_error("cannot format number");
    return std::string(buf, end);
}

// Rejects empty sets and sentences that tokenize to nothing.
inline void validate(const SentenceSet& s) {
    if (s.id.empty()) throw format_error("sentence set without id");
    if (s.sentences.empty()) throw format_error("sentence set '" + s.id + "' has no sentences");
    for (std::size_t i = 0; i < s.sentences.size(); ++i)
        if (tokenize(s.sentences[i]).empty())
            throw format_error("sentence " + std::to_string(i) + " of '" + s.id + "' has no tokens");
}

// ---- SentenceSet ----------------------------------------------------------

inline json to_json(const SentenceSet& s) {
    json j;
    j["id"] = s.id;
    j["role"] = to_string(s.role);
    j["sentences"] = s.sentences;
    if (!s.doc_id.empty()) j["doc_id"] = s.doc_id;
    if (!s.system_id.empty()) j["system_id"] = s.system_id;
    if (s.role == Role::model_summary || !s.extractive) j["extractive"] = s.extractive;
    return j;
}

namespace detail {

inline const json& member(const json& j, const char* key) {
    if (!j.is_object()) throw format_error("expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw format_error(std::string("missing field '") + key + "'");
    return *it;
}

template <class T>
T field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw format_error(std::string("missing field '") + key + "'");
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception&) {
        throw format_error(std::string("field '") + key + "' has the wrong type");
    }
}

template <class T>
T optional_field(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception&) {
        throw format_error(std::string("field '") + key + "' has the wrong type");
    }
}

inline double finite_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw format_error(what + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw format_error(what + ": non-finite value");
    return x;
}

}  // namespace detail

inline SentenceSet sentence_set_from_json(const json& j) {
    if (!j.is_object()) throw format_error("sentence set record must be an object");
    SentenceSet s;
    s.id = detail::field<std::string>(j, "id");
    try {
        s.role = parse_Role(detail::field<std::string>(j, "role"));
    } catch (const invalid_input& e) {
        throw format_error(e.what());
    }
    s.sentences = detail::field<std::vector<std::string>>(j, "sentences");
    s.doc_id = detail::optional_field<std::string>(j, "doc_id", "");
    s.system_id = detail::optional_field<std::string>(j, "system_id", "");
    s.extractive = detail::optional_field<bool>(j, "extractive", true);
    validate(s);
    return s;
}

// ---- EmbeddingSet ---------------------------------------------------------

inline json to_json(const EmbeddingSet& e) {
    json j;
    j["sentence_set_id"] = e.sentence_set_id;
    j["dim"] = e.dim;
    j["vectors"] = e.vectors;
    return j;
}

inline EmbeddingSet embedding_set_from_json(const json& j) {
    if (!j.is_object()) throw format_error("embedding file must hold an object");
    EmbeddingSet e;
    e.sentence_set_id = detail::field<std::string>(j, "sentence_set_id");
    auto dim = detail::field<long long>(j, "dim");
    if (dim <= 0) throw format_error("embedding dim must be positive");
    e.dim = static_cast<std::size_t>(dim);
    const auto& vectors = detail::member(j, "vectors");
    if (!vectors.is_array()) throw format_error("'vectors' must be an array");
    for (const auto& row : vectors) {
        if (!row.is_array()) throw format_error("each vector must be an array");
        std::vector<double> v;
        v.reserve(row.size());
        for (const auto& x : row) v.push_back(detail::finite_number(x, "embedding component"));
        e.vectors.push_back(std::move(v));
    }
    validate(e);
    return e;
}

// ---- SimilarityMatrix -----------------------------------------------------

inline json to_json(const SimilarityMatrix& m) {
    json j;
    j["kind"] = to_string(m.kind);
    j["row_ids"] = m.row_ids;
    j["col_ids"] = m.col_ids;
    j["values"] = m.values;
    return j;
}

// Parses and shape-checks; does not clamp (see load_external_matrix).
inline SimilarityMatrix similarity_matrix_from_json(const json& j) {
    if (!j.is_object()) throw format_error("similarity matrix file must hold an object");
    SimilarityMatrix m;
    try {
        m.kind = parse_SimilarityKind(detail::field<std::string>(j, "kind"));
    } catch (const invalid_input& e) {
        throw format_error(e.what());
    }
    m.row_ids = detail::field<std::vector<std::size_t>>(j, "row_ids");
    m.col_ids = detail::field<std::vector<std::size_t>>(j, "col_ids");
    const auto& values = detail::member(j, "values");
    if (!values.is_array() || values.size() != m.row_ids.size())
        throw format_error("matrix has " + std::to_string(values.is_array() ? values.size() : 0) +
                           " rows, expected " + std::to_string(m.row_ids.size()));
    for (const auto& row : values) {
        if (!row.is_array() || row.size() != m.col_ids.size())
            throw format_error("matrix row length does not match col_ids");
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& x : row) r.push_back(detail::finite_number(x, "similarity value"));
        m.values.push_back(std::move(r));
    }
    return m;
}

// ---- RelevanceVector / GroundTruthRanking / ModelAlignment ----------------

inline json to_json(const RelevanceVector& r) {
    json j;
    j["doc_id"] = r.doc_id;
    j["scores"] = r.scores;
    return j;
}

inline RelevanceVector relevance_vector_from_json(const json& j) {
    RelevanceVector r;
    r.doc_id = detail::field<std::string>(j, "doc_id");
    for (const auto& x : detail::member(j, "scores")) r.scores.push_back(detail::finite_number(x, "relevance"));
    return r;
}

inline json to_json(const GroundTruthRanking& g) {
    json j;
    j["doc_id"] = g.doc_id;
    j["order"] = g.order;
    j["gains"] = g.gains;
    j["gain_scheme"] = to_string(g.gain_scheme);
    return j;
}

inline GroundTruthRanking ground_truth_from_json(const json& j) {
    GroundTruthRanking g;
    g.doc_id = detail::field<std::string>(j, "doc_id");
    g.order = detail::field<std::vector<std::size_t>>(j, "order");
    for (const auto& x : detail::member(j, "gains")) g.gains.push_back(detail::finite_number(x, "gain"));
    g.gain_scheme = parse_GainScheme(detail::field<std::string>(j, "gain_scheme"));
    return g;
}

inline json to_json(const ModelAlignment& a) {
    json j;
    j["model_summary_id"] = a.model_summary_id;
    json matches = json::array();
    for (const auto& m : a.matches)
        matches.push_back({{"model_index", m.model_index},
                           {"doc_index", m.doc_index},
                           {"score", m.score},
                           {"method", to_string(m.method)}});
    j["matches"] = std::move(matches);
    return j;
}

inline ModelAlignment model_alignment_from_json(const json& j) {
    ModelAlignment a;
    a.model_summary_id = detail::field<std::string>(j, "model_summary_id");
    for (const auto& m : detail::member(j, "matches"))
        a.matches.push_back({detail::field<std::size_t>(m, "model_index"),
                             detail::field<std::size_t>(m, "doc_index"),
                             detail::finite_number(detail::member(m, "score"), "match score"),
                             parse_MatchMethod(detail::field<std::string>(m, "method"))});
    return a;
}

// ---- MetricScore ----------------------------------------------------------

inline json to_json(const MetricScore& s) {
    json j;
    j["sem_ncg"] = s.sem_ncg();
    j["score_red"] = s.score_red();
    j["final"] = s.final_score();
    j["k"] = s.k();
    j["lambda"] = s.lambda();
    j["red_backend"] = to_string(s.red_backend());
    j["gain_scheme"] = to_string(s.gain_scheme());
    j["embedding_name"] = s.embedding_name();
    return j;
}

inline MetricScore metric_score_from_json(const json& j) {
    return MetricScore(detail::finite_number(detail::member(j, "sem_ncg"), "sem_ncg"),
                       detail::finite_number(detail::member(j, "score_red"), "score_red"),
                       detail::finite_number(detail::member(j, "final"), "final"),
                       detail::field<std::size_t>(j, "k"),
                       detail::finite_number(detail::member(j, "lambda"), "lambda"),
                       parse_Penalty(detail::field<std::string>(j, "red_backend")),
                       detail::field<std::string>(j, "embedding_name"),
                       parse_GainScheme(detail::optional_field<std::string>(
                           j, "gain_scheme", "normalized_relevance")));
}

// ---- AnnotationRecord -----------------------------------------------------

inline json to_json(const AnnotationRecord& a) {
    json j;
    j["doc_id"] = a.doc_id;
    j["system_id"] = a.system_id;
    j["consistency"] = a.consistency;
    j["relevance"] = a.relevance;
    j["coherence"] = a.coherence;
    j["fluency"] = a.fluency;
    return j;
}

inline AnnotationRecord annotation_from_json(const json& j) {
    AnnotationRecord a;
    a.doc_id = detail::field<std::string>(j, "doc_id");
    a.system_id = detail::field<std::string>(j, "system_id");
    auto unit = [&](const char* key) {
        double x = detail::finite_number(detail::member(j, key), key);
        if (x < 0.0 || x > 1.0) throw format_error(std::string(key) + " outside [0, 1]");
        return x;
    };
    a.consistency = unit("consistency");
    a.relevance = unit("relevance");
    a.coherence = unit("coherence");
    a.fluency = unit("fluency");
    return a;
}

// ---- CorrelationReport ----------------------------------------------------

inline json to_json(const CorrelationRow& r) {
    json j;
    j["embedding"] = r.embedding_name;
    j["penalty"] = r.penalty;
    j["setting"] = to_string(r.setting);
    j["dimension"] = to_string(r.dimension);
    j["tau"] = r.tau ? json(*r.tau) : json(nullptr);
    j["n"] = r.n_samples;
    j["is_column_max"] = r.is_column_max;
    return j;
}

inline CorrelationRow correlation_row_from_json(const json& j) {
    CorrelationRow r;
    r.embedding_name = detail::field<std::string>(j, "embedding");
    r.penalty = detail::field<std::string>(j, "penalty");
    r.setting = parse_ReferenceSetting(detail::field<std::string>(j, "setting"));
    r.dimension = parse_Dimension(detail::field<std::string>(j, "dimension"));
    const auto& tau = detail::member(j, "tau");
    if (!tau.is_null()) r.tau = detail::finite_number(tau, "tau");
    r.n_samples = detail::field<std::size_t>(j, "n");
    r.is_column_max = detail::field<bool>(j, "is_column_max");
    return r;
}

// ---- files ----------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot write " + path.string());
    out << content;
}

inline json parse_json(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw format_error(where + ": " + e.what());
    }
}

// One parsed object per non-blank line.
inline std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_json(line, path.string() + ":" + std::to_string(line_no)));
    }
    return out;
}

template <class T>
std::string to_jsonl(const std::vector<T>& items) {
    std::string out;
    for (const auto& item : items) {
        out += to_json(item).dump();
        out += '\n';
    }
    return out;
}

inline std::vector<SentenceSet> load_sentence_sets(const std::filesystem::path& path) {
    std::vector<SentenceSet> out;
    std::size_t index = 0;
    for (const auto& j : read_jsonl(path)) {
        ++index;
        try {
            out.push_back(sentence_set_from_json(j));
        } catch (const format_error& e) {
            throw format_error(path.string() + " record " + std::to_string(index) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
    std::vector<AnnotationRecord> out;
    for (const auto& j : read_jsonl(path)) out.push_back(annotation_from_json(j));
    return out;
}

inline EmbeddingSet load_embedding_set(const std::filesystem::path& path) {
    try {
        return embedding_set_from_json(parse_json(read_file(path), path.string()));
    } catch (const nlohmann::json::exception& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

// File-name stem for a sentence-set id: anything outside [A-Za-z0-9._-]
// becomes '_'. Embedding exporters must use the same rule.
inline std::string file_stem(std::string_view id) {
    std::string out(id);
    for (char& c : out) {
        bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
        if (!keep) c = '_';
    }
    return out;
}

inline std::filesystem::path embedding_path(const std::filesystem::path& dir, std::string_view id) {
    return dir / (file_stem(id) + ".json");
}

inline std::filesystem::path matrix_path(const std::filesystem::path& dir, std::string_view summary_id,
                                         SimilarityKind kind) {
    return dir / (file_stem(summary_id) + "." + std::string(to_string(kind)) + ".json");
}

// Loads `<dir>/<stem>.json` on first use and keeps it.
class EmbeddingStore {
public:
    explicit EmbeddingStore(std::filesystem::path dir, std::string name = {})
        : dir_(std::move(dir)), name_(std::move(name)) {
        if (name_.empty()) name_ = dir_.filename().string();
        if (name_.empty()) name_ = dir_.parent_path().filename().string();
    }

    const std::string& name() const { return name_; }
    const std::filesystem::path& dir() const { return dir_; }

    const EmbeddingSet& get(const SentenceSet& set) {
        auto it = cache_.find(set.id);
        if (it == cache_.end()) {
            EmbeddingSet e = load_embedding_set(embedding_path(dir_, set.id));
            if (e.sentence_set_id != set.id)
                throw format_error("embedding file for '" + set.id + "' names '" +
                                   e.sentence_set_id + "'");
            check_aligned(set, e);
            it = cache_.emplace(set.id, std::move(e)).first;
        }
        return it->second;
    }

private:
    std::filesystem::path dir_;
    std::string name_;
    std::map<std::string, EmbeddingSet> cache_;
};

}  // namespace semncg
