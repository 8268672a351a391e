#include "revguard/prob_table.hpp"

#include <algorithm>
#include <cstdio>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

constexpr std::string_view kHeader = "# revguard token-prob-table v1";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParseError("table line " + std::to_string(line_no) + ": bad count '" + s + "'");
    }
}

void fill_probabilities(TokenProbTable& t) {
    t.p_ai.clear();
    t.p_human.clear();
    for (const auto& [tok, n] : t.df_ai) t.p_ai[tok] = static_cast<double>(n) / static_cast<double>(t.n_ai_reviews);
    for (const auto& [tok, n] : t.df_human) {
        t.p_human[tok] = static_cast<double>(n) / static_cast<double>(t.n_human_reviews);
    }
}

}  // namespace

double TokenProbTable::ai(std::string_view token) const {
    auto it = p_ai.find(std::string(token));
    return it == p_ai.end() ? 0.0 : it->second;
}

double TokenProbTable::human(std::string_view token) const {
    auto it = p_human.find(std::string(token));
    return it == p_human.end() ? 0.0 : it->second;
}

bool TokenProbTable::in_ai_vocabulary(std::string_view token) const {
    return df_ai.count(std::string(token)) > 0;
}

std::string TokenProbTable::hash() const { return io::sha256_hex(serialize_table(*this)); }

TokenProbTable build_prob_table_from_tokens(const std::vector<std::set<std::string>>& ai_docs,
                                            const std::vector<std::set<std::string>>& human_docs,
                                            PosClass pos_class) {
    if (ai_docs.empty() || human_docs.empty()) {
        throw ArgumentError("probability table needs non-empty AI and human review sets");
    }
    TokenProbTable t;
    t.pos_class = pos_class;
    t.n_ai_reviews = ai_docs.size();
    t.n_human_reviews = human_docs.size();
    for (const auto& doc : ai_docs) {
        for (const auto& tok : doc) ++t.df_ai[tok];
    }
    for (const auto& doc : human_docs) {
        for (const auto& tok : doc) ++t.df_human[tok];
    }
    fill_probabilities(t);
    return t;
}

TokenProbTable build_prob_table(const std::vector<ReviewRecord>& ai_reviews,
                                const std::vector<ReviewRecord>& human_reviews, PosClass pos_class,
                                const Tagger& tagger) {
    auto docs = [&](const std::vector<ReviewRecord>& reviews) {
        std::vector<std::set<std::string>> out;
        out.reserve(reviews.size());
        for (const auto& r : reviews) {
            std::set<std::string> doc;
            for (const auto& [tok, n] : extract_tokens(tagger, r.text, pos_class)) doc.insert(tok);
            out.push_back(std::move(doc));
        }
        return out;
    };
    auto t = build_prob_table_from_tokens(docs(ai_reviews), docs(human_reviews), pos_class);
    for (const auto& r : ai_reviews) t.source_review_ids.insert(r.review_id);
    for (const auto& r : human_reviews) t.source_review_ids.insert(r.review_id);
    return t;
}

std::vector<std::string> top_k_tokens(const TokenProbTable& table, CorpusSide side, std::size_t k) {
    if (k == 0) throw ArgumentError("top_k_tokens needs k >= 1");
    const auto& probs = side == CorpusSide::AI ? table.p_ai : table.p_human;
    std::vector<std::pair<std::string, double>> entries(probs.begin(), probs.end());
    // map order is already ascending by token, so a stable sort on probability
    // leaves ties lexicographic.
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < entries.size() && i < k; ++i) out.push_back(entries[i].first);
    return out;
}

std::string serialize_table(const TokenProbTable& table) {
    std::string out(kHeader);
    out += "\npos_class\t";
    out += to_string(table.pos_class);
    out += "\nnormalization\tLOWERCASED\nn_ai_reviews\t" + std::to_string(table.n_ai_reviews) +
           "\nn_human_reviews\t" + std::to_string(table.n_human_reviews) + "\n";
    for (const auto& id : table.source_review_ids) out += "source\t" + id + "\n";
    out += "columns\ttoken\tdf_ai\tdf_human\tp_ai\tp_human\n";
    std::set<std::string> tokens;
    for (const auto& [tok, n] : table.df_ai) tokens.insert(tok);
    for (const auto& [tok, n] : table.df_human) tokens.insert(tok);
    for (const auto& tok : tokens) {
        auto a = table.df_ai.find(tok);
        auto h = table.df_human.find(tok);
        const std::size_t na = a == table.df_ai.end() ? 0 : a->second;
        const std::size_t nh = h == table.df_human.end() ? 0 : h->second;
        out += "row\t" + tok + "\t" + std::to_string(na) + "\t" + std::to_string(nh) + "\t" +
               format_double(table.ai(tok)) + "\t" + format_double(table.human(tok)) + "\n";
    }
    return out;
}

TokenProbTable parse_table(std::string_view body) {
    TokenProbTable t;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool have_pos = false;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto nl = body.find('\n', pos);
        if (nl == std::string_view::npos) nl = body.size();
        std::string_view line = body.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kHeader) throw ParseError("not a token-prob-table v1 file");
            header_seen = true;
            continue;
        }
        auto cells = text::split(line, '\t');
        const auto& key = cells[0];
        if (key == "pos_class" && cells.size() == 2) {
            t.pos_class = parse_pos_class(cells[1]);
            have_pos = true;
        } else if (key == "normalization" && cells.size() == 2) {
            if (cells[1] != "LOWERCASED") throw ParseError("unsupported normalization " + cells[1]);
        } else if (key == "n_ai_reviews" && cells.size() == 2) {
            t.n_ai_reviews = parse_count(cells[1], line_no);
        } else if (key == "n_human_reviews" && cells.size() == 2) {
            t.n_human_reviews = parse_count(cells[1], line_no);
        } else if (key == "source" && cells.size() == 2) {
            t.source_review_ids.insert(cells[1]);
        } else if (key == "columns") {
            continue;
        } else if (key == "row" && cells.size() == 6) {
            const auto na = parse_count(cells[2], line_no);
            const auto nh = parse_count(cells[3], line_no);
            if (na > 0) t.df_ai[cells[1]] = na;
            if (nh > 0) t.df_human[cells[1]] = nh;
        } else {
            throw ParseError("table line " + std::to_string(line_no) + ": unrecognised record");
        }
    }
    if (!header_seen || !have_pos) throw ParseError("table is missing its header");
    if (t.n_ai_reviews == 0 || t.n_human_reviews == 0) throw ParseError("table has zero review counts");
    for (const auto& [tok, n] : t.df_ai) {
        if (n > t.n_ai_reviews) throw ParseError("document frequency of '" + tok + "' exceeds review count");
    }
    for (const auto& [tok, n] : t.df_human) {
        if (n > t.n_human_reviews) throw ParseError("document frequency of '" + tok + "' exceeds review count");
    }
    fill_probabilities(t);
    return t;
}

TokenProbTable load_table(const std::filesystem::path& path) { return parse_table(io::read_file(path)); }

void save_table(const TokenProbTable& table, const std::filesystem::path& path) {
    io::write_file_atomic(path, serialize_table(table));
}

}  // namespace revguard
