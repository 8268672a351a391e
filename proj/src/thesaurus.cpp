#include "revguard/thesaurus.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

struct PosFiles {
    PosClass pos;
    const char* name;
};

constexpr PosFiles kPosFiles[] = {
    {PosClass::ADJECTIVE, "adj"},
    {PosClass::NOUN, "noun"},
    {PosClass::ADVERB, "adv"},
};

const std::vector<std::pair<std::string, std::string>>& substitutions(PosClass pos) {
    static const std::vector<std::pair<std::string, std::string>> noun = {
        {"s", ""}, {"ses", "s"}, {"ves", "f"}, {"xes", "x"}, {"zes", "z"},
        {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"ies", "y"}};
    static const std::vector<std::pair<std::string, std::string>> adj = {
        {"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};
    static const std::vector<std::pair<std::string, std::string>> none;
    switch (pos) {
        case PosClass::NOUN: return noun;
        case PosClass::ADJECTIVE: return adj;
        case PosClass::ADVERB: return none;
    }
    return none;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_marker(std::string_view lemma) {
    // "good(a)" -> "good"; markers only ever trail the lemma.
    auto paren = lemma.find('(');
    if (paren != std::string_view::npos && lemma.back() == ')') lemma = lemma.substr(0, paren);
    return std::string(lemma);
}

bool is_license_line(std::string_view line) { return line.size() >= 2 && line[0] == ' ' && line[1] == ' '; }

template <typename F>
void for_each_line(std::string_view body, F&& f) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto nl = body.find('\n', pos);
        if (nl == std::string_view::npos) nl = body.size();
        f(body.substr(pos, nl - pos), pos);
        pos = nl + 1;
    }
}

PosClass parse_overlay_pos(std::string_view s) {
    if (s == "a" || s == "s") return PosClass::ADJECTIVE;
    if (s == "n") return PosClass::NOUN;
    if (s == "r") return PosClass::ADVERB;
    return parse_pos_class(s);
}

}  // namespace

std::shared_ptr<const Thesaurus> Thesaurus::load(const std::filesystem::path& wordnet_dir,
                                                 const std::filesystem::path& overlay,
                                                 ThesaurusOptions options) {
    auto t = std::make_shared<Thesaurus>();
    t->options_ = options;
    t->has_wordnet_ = true;
    std::string digest_input;

    for (const auto& pf : kPosFiles) {
        PosData pd;
        const std::string index_body = io::read_file(io::resolve_maybe_gz(wordnet_dir / (std::string("index.") + pf.name)));
        for_each_line(index_body, [&](std::string_view line, std::size_t) {
            if (line.empty() || is_license_line(line)) return;
            auto cells = text::split_words(line);
            if (cells.size() < 4) throw ParseError("malformed WordNet index line: " + std::string(line));
            // lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt offsets...
            const std::size_t synset_cnt = std::stoul(cells[2]);
            const std::size_t p_cnt = std::stoul(cells[3]);
            const std::size_t first = 4 + p_cnt + 2;
            if (cells.size() < first + synset_cnt) {
                throw ParseError("malformed WordNet index line: " + std::string(line));
            }
            std::vector<std::size_t> offsets;
            offsets.reserve(synset_cnt);
            for (std::size_t i = 0; i < synset_cnt; ++i) offsets.push_back(std::stoul(cells[first + i]));
            pd.index.emplace(cells[0], std::move(offsets));
        });

        const auto exc_path = wordnet_dir / (std::string(pf.name) + ".exc");
        std::string exc_body;
        if (std::filesystem::exists(exc_path) || std::filesystem::exists(exc_path.string() + ".gz")) {
            exc_body = io::read_file(io::resolve_maybe_gz(exc_path));
            for_each_line(exc_body, [&](std::string_view line, std::size_t) {
                auto cells = text::split_words(line);
                if (cells.size() < 2) return;
                auto& forms = pd.exceptions[cells[0]];
                forms.insert(forms.end(), cells.begin() + 1, cells.end());
            });
        }

        pd.data = io::read_file(io::resolve_maybe_gz(wordnet_dir / (std::string("data.") + pf.name)));
        bool aligned = true;
        for_each_line(pd.data, [&](std::string_view line, std::size_t at) {
            if (!aligned || line.empty() || is_license_line(line)) return;
            if (std::strtoul(std::string(line.substr(0, 8)).c_str(), nullptr, 10) != at) aligned = false;
        });
        if (!aligned) {
            for_each_line(pd.data, [&](std::string_view line, std::size_t at) {
                if (line.empty() || is_license_line(line)) return;
                pd.line_at[std::strtoul(std::string(line.substr(0, 8)).c_str(), nullptr, 10)] = at;
            });
        }

        digest_input += index_body;
        digest_input += exc_body;
        digest_input += pd.data;
        t->wordnet_.emplace(pf.pos, std::move(pd));
    }

    t->source_ = "wordnet:" + wordnet_dir.string();
    if (!overlay.empty()) {
        const std::string body = io::read_file(overlay);
        std::size_t line_no = 0;
        for_each_line(body, [&](std::string_view line, std::size_t) {
            ++line_no;
            auto trimmed = text::trim(line);
            if (trimmed.empty() || trimmed.front() == '#') return;
            auto cells = text::split_words(trimmed);
            if (cells.size() < 3) {
                throw ParseError("thesaurus overlay line " + std::to_string(line_no) + ": expected pos, word and synonyms");
            }
            auto& list = t->overlay_[{parse_overlay_pos(cells[0]), text::to_lower(cells[1])}];
            for (std::size_t i = 2; i < cells.size(); ++i) list.push_back(text::to_lower(cells[i]));
        });
        digest_input += body;
        t->source_ += "+overlay:" + overlay.filename().string();
    }
    digest_input += options.include_similar ? "|similar" : "|nosimilar";
    digest_input += options.skip_multiword ? "|single" : "|multi";
    t->version_ = io::sha256_hex(digest_input).substr(0, 16);
    return t;
}

std::shared_ptr<const Thesaurus> Thesaurus::from_entries(
    const std::map<std::pair<PosClass, std::string>, std::vector<std::string>>& entries) {
    auto t = std::make_shared<Thesaurus>();
    std::string digest_input;
    for (const auto& [key, list] : entries) {
        auto& dest = t->overlay_[{key.first, text::to_lower(key.second)}];
        digest_input += std::string(to_string(key.first)) + " " + key.second;
        for (const auto& s : list) {
            dest.push_back(text::to_lower(s));
            digest_input += " " + s;
        }
        digest_input += "\n";
    }
    t->source_ = "entries";
    t->version_ = io::sha256_hex(digest_input).substr(0, 16);
    return t;
}

std::vector<std::string> Thesaurus::morphy(const PosData& pd, PosClass pos, const std::string& form) const {
    std::vector<std::string> candidates{form};
    if (auto exc = pd.exceptions.find(form); exc != pd.exceptions.end()) {
        candidates.insert(candidates.end(), exc->second.begin(), exc->second.end());
    } else {
        for (const auto& [old_suffix, new_suffix] : substitutions(pos)) {
            if (ends_with(form, old_suffix)) {
                candidates.push_back(form.substr(0, form.size() - old_suffix.size()) + new_suffix);
            }
        }
    }
    std::vector<std::string> out;
    for (auto& c : candidates) {
        if (pd.index.count(c) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
}

Thesaurus::Synset Thesaurus::read_synset(const PosData& pd, std::size_t offset) const {
    std::size_t at = offset;
    if (!pd.line_at.empty()) {
        auto it = pd.line_at.find(offset);
        if (it == pd.line_at.end()) throw ParseError("WordNet synset offset not found: " + std::to_string(offset));
        at = it->second;
    }
    if (at >= pd.data.size()) throw ParseError("WordNet synset offset out of range: " + std::to_string(offset));
    auto nl = pd.data.find('\n', at);
    std::string_view line(pd.data.data() + at, (nl == std::string::npos ? pd.data.size() : nl) - at);
    auto bar = line.find('|');
    if (bar != std::string_view::npos) line = line.substr(0, bar);
    auto cells = text::split_words(line);

    Synset s;
    if (cells.size() < 4) throw ParseError("malformed WordNet data line at offset " + std::to_string(offset));
    s.pos = cells[2].empty() ? 'n' : cells[2][0];
    const std::size_t w_cnt = std::stoul(cells[3], nullptr, 16);
    std::size_t i = 4;
    for (std::size_t w = 0; w < w_cnt && i + 1 < cells.size(); ++w, i += 2) {
        s.lemmas.push_back(text::to_lower(strip_marker(cells[i])));
    }
    if (i >= cells.size()) return s;
    const std::size_t p_cnt = std::stoul(cells[i]);
    ++i;
    for (std::size_t p = 0; p < p_cnt && i + 3 < cells.size(); ++p, i += 4) {
        if (cells[i] == "&" && cells[i + 3] == "0000") {
            s.similar.push_back(std::stoul(cells[i + 1]));
        }
    }
    return s;
}

std::vector<std::string> Thesaurus::compute(const std::string& token, PosClass pos) const {
    std::vector<std::string> out;
    auto add = [&](const std::string& name) {
        if (name == token) return;
        if (options_.skip_multiword && name.find('_') != std::string::npos) return;
        if (std::find(out.begin(), out.end(), name) != out.end()) return;
        out.push_back(name);
    };

    if (has_wordnet_) {
        const PosData& pd = wordnet_.at(pos);
        std::vector<Synset> heads;
        for (const auto& form : morphy(pd, pos, token)) {
            for (auto offset : pd.index.at(form)) heads.push_back(read_synset(pd, offset));
        }
        for (const auto& s : heads) {
            for (const auto& l : s.lemmas) add(l);
        }
        if (pos == PosClass::ADJECTIVE && options_.include_similar) {
            for (const auto& s : heads) {
                for (auto offset : s.similar) {
                    for (const auto& l : read_synset(pd, offset).lemmas) add(l);
                }
            }
        }
    }
    if (auto it = overlay_.find({pos, token}); it != overlay_.end()) {
        for (const auto& l : it->second) add(l);
    }
    return out;
}

std::vector<std::string> Thesaurus::synonyms(std::string_view token, PosClass pos) const {
    std::pair<PosClass, std::string> key{pos, text::to_lower(token)};
    {
        std::lock_guard lock(memo_mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto result = compute(key.second, pos);
    std::lock_guard lock(memo_mutex_);
    memo_.emplace(std::move(key), result);
    return result;
}

std::vector<std::string> lookup_synonyms(std::string_view token, PosClass pos, const Thesaurus& thesaurus) {
    return thesaurus.synonyms(token, pos);
}

}  // namespace revguard
