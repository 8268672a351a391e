#include "revguard/tagger.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

constexpr std::array<std::string_view, 24> kAbbreviations = {
    "e.g.", "i.e.", "etc.", "al.", "fig.", "figs.", "eq.", "eqs.", "vs.", "cf.", "sec.", "dr.",
    "mr.", "mrs.", "ms.", "prof.", "approx.", "no.", "vol.", "pp.", "resp.", "tab.", "ref.", "refs."};

bool is_abbreviation(std::string_view word) {
    const auto lower = text::to_lower(word);
    if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end()) {
        return true;
    }
    // Initialisms such as "U.S." keep their final period.
    if (word.size() >= 4) {
        bool pattern = true;
        for (std::size_t i = 0; i < word.size(); ++i) {
            const bool want_dot = (i % 2) == 1;
            if (want_dot != (word[i] == '.')) {
                pattern = false;
                break;
            }
        }
        if (pattern) return true;
    }
    return false;
}

bool is_open_punct(char c) {
    return c == '(' || c == '[' || c == '{' || c == '"' || c == '\'' || c == '`';
}

bool is_close_punct(char c) {
    return c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == ')' || c == ']' ||
           c == '}' || c == '"' || c == '\'';
}

constexpr std::array<std::string_view, 7> kClitics = {"n't", "'s", "'re", "'ve", "'ll", "'d", "'m"};

bool ends_with_ci(std::string_view s, std::string_view suffix) {
    if (s.size() < suffix.size()) return false;
    return text::to_lower(s.substr(s.size() - suffix.size())) == suffix;
}

void tokenize_chunk(std::string_view chunk, std::size_t base, std::vector<Token>& out) {
    std::size_t begin = 0;
    std::size_t end = chunk.size();

    while (begin < end && is_open_punct(chunk[begin])) {
        // A leading apostrophe followed by a clitic ("'s") is left to the clitic rule.
        if (chunk[begin] == '\'' && end - begin > 1 && std::isalpha(static_cast<unsigned char>(chunk[begin + 1])) &&
            begin + 2 >= end) {
            break;
        }
        out.push_back({std::string(chunk.substr(begin, 1)), base + begin});
        ++begin;
    }

    std::vector<Token> trailing;
    while (end > begin) {
        std::string_view core = chunk.substr(begin, end - begin);
        if (core.size() >= 3 && core.substr(core.size() - 3) == "...") {
            trailing.push_back({"...", base + end - 3});
            end -= 3;
            continue;
        }
        const char last = chunk[end - 1];
        if (is_close_punct(last)) {
            trailing.push_back({std::string(1, last), base + end - 1});
            --end;
            continue;
        }
        if (last == '.' && core.size() > 1 && !is_abbreviation(core)) {
            trailing.push_back({".", base + end - 1});
            --end;
            continue;
        }
        if (last == '.' && core.size() == 1) {
            trailing.push_back({".", base + end - 1});
            --end;
        }
        break;
    }

    if (end > begin) {
        std::string_view core = chunk.substr(begin, end - begin);
        std::size_t split = core.size();
        for (auto clitic : kClitics) {
            if (core.size() > clitic.size() && ends_with_ci(core, clitic)) {
                split = core.size() - clitic.size();
                break;
            }
        }
        if (split > 0) {
            out.push_back({std::string(core.substr(0, split)), base + begin});
        }
        if (split < core.size()) {
            out.push_back({std::string(core.substr(split)), base + begin + split});
        }
    }
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
        out.push_back(*it);
    }
}

bool ends_sentence(const Token& t) {
    return t.text == "." || t.text == "!" || t.text == "?";
}

std::string normalize_word(std::string_view word) {
    if (word.find('-') != std::string_view::npos && word.front() != '-') return "!HYPHEN";
    if (text::is_ascii_digits(word) && word.size() == 4) return "!YEAR";
    if (!word.empty() && word.front() >= '0' && word.front() <= '9') return "!DIGITS";
    return text::to_lower(word);
}

}  // namespace

std::string_view to_string(PosClass p) {
    switch (p) {
        case PosClass::ADJECTIVE: return "ADJECTIVE";
        case PosClass::NOUN: return "NOUN";
        case PosClass::ADVERB: return "ADVERB";
    }
    return "ADJECTIVE";
}

PosClass parse_pos_class(std::string_view s) {
    const auto lower = text::to_lower(s);
    if (lower == "adjective" || lower == "adj" || lower == "a") return PosClass::ADJECTIVE;
    if (lower == "noun" || lower == "n") return PosClass::NOUN;
    if (lower == "adverb" || lower == "adv" || lower == "r") return PosClass::ADVERB;
    throw ArgumentError("unknown part-of-speech class '" + std::string(s) + "'");
}

std::optional<PosClass> pos_class_of(std::string_view tag) {
    if (tag == "JJ" || tag == "JJR" || tag == "JJS") return PosClass::ADJECTIVE;
    if (tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS") return PosClass::NOUN;
    if (tag == "RB" || tag == "RBR" || tag == "RBS") return PosClass::ADVERB;
    return std::nullopt;
}

std::vector<std::vector<Token>> tokenize_sentences(std::string_view input) {
    std::vector<std::vector<Token>> sentences;
    std::vector<Token> current;
    std::size_t i = 0;
    int newlines = 0;
    while (i < input.size()) {
        if (is_space(input[i])) {
            if (input[i] == '\n') ++newlines;
            ++i;
            continue;
        }
        if (newlines >= 2 && !current.empty()) {
            sentences.push_back(std::move(current));
            current.clear();
        }
        newlines = 0;
        std::size_t j = i;
        while (j < input.size() && !is_space(input[j])) ++j;
        std::vector<Token> chunk_tokens;
        tokenize_chunk(input.substr(i, j - i), i, chunk_tokens);
        for (auto& t : chunk_tokens) {
            const bool boundary = ends_sentence(t);
            current.push_back(std::move(t));
            if (boundary) {
                sentences.push_back(std::move(current));
                current.clear();
            }
        }
        i = j;
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

std::vector<TaggedToken> Tagger::tag(std::string_view input) const {
    std::vector<TaggedToken> out;
    for (const auto& sentence : tokenize_sentences(input)) {
        auto tags = tag_sentence(sentence);
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (!text::has_alnum(sentence[i].text)) continue;
            out.push_back({sentence[i].text, std::move(tags[i]), sentence[i].offset});
        }
    }
    return out;
}

std::vector<TaggedToken> tag_tokens(const Tagger& tagger, std::string_view input) {
    if (input.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos) {
        throw ArgumentError("cannot tag an empty text");
    }
    return tagger.tag(input);
}

PerceptronTagger PerceptronTagger::load(const std::filesystem::path& model_path) {
    const std::string body = io::read_file(io::resolve_maybe_gz(model_path));
    PerceptronTagger t;
    std::unordered_map<std::string, std::uint16_t> label_index;

    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < body.size()) {
        auto nl = body.find('\n', pos);
        if (nl == std::string::npos) nl = body.size();
        std::string_view line(body.data() + pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto cells = text::split(line, '\t');
        const auto& kind = cells[0];
        if (kind == "classes") {
            for (std::size_t i = 1; i < cells.size(); ++i) {
                label_index[cells[i]] = static_cast<std::uint16_t>(t.classes_.size());
                t.classes_.push_back(cells[i]);
            }
        } else if (kind == "tag" && cells.size() == 3) {
            t.tagdict_[cells[1]] = cells[2];
        } else if (kind == "feat" && cells.size() >= 2) {
            std::vector<LabelWeight> row;
            row.reserve(cells.size() - 2);
            for (std::size_t i = 2; i < cells.size(); ++i) {
                if (cells[i].empty()) continue;
                const auto eq = cells[i].rfind('=');
                if (eq == std::string::npos) {
                    throw ParseError("tagger model line " + std::to_string(line_no) + ": bad weight cell");
                }
                auto it = label_index.find(cells[i].substr(0, eq));
                if (it == label_index.end()) {
                    throw ParseError("tagger model line " + std::to_string(line_no) + ": unknown class");
                }
                row.push_back({it->second, std::strtod(cells[i].c_str() + eq + 1, nullptr)});
            }
            t.weights_.emplace(cells[1], std::move(row));
        } else {
            throw ParseError("tagger model line " + std::to_string(line_no) + ": unrecognised record");
        }
    }
    if (t.classes_.empty()) {
        throw ParseError("tagger model has no classes: " + model_path.string());
    }
    return t;
}

std::string PerceptronTagger::predict(const std::vector<std::string>& features) const {
    std::vector<double> scores(classes_.size(), 0.0);
    for (const auto& f : features) {
        auto it = weights_.find(f);
        if (it == weights_.end()) continue;
        for (const auto& lw : it->second) {
            scores[lw.label] += lw.weight;
        }
    }
    // Highest score wins; ties go to the lexicographically greatest label.
    std::size_t best = 0;
    for (std::size_t i = 1; i < classes_.size(); ++i) {
        if (scores[i] > scores[best] || (scores[i] == scores[best] && classes_[i] > classes_[best])) {
            best = i;
        }
    }
    return classes_[best];
}

std::vector<std::string> PerceptronTagger::tag_sentence(const std::vector<Token>& sentence) const {
    std::vector<std::string> context;
    context.reserve(sentence.size() + 4);
    context.emplace_back("-START-");
    context.emplace_back("-START2-");
    for (const auto& tok : sentence) context.push_back(normalize_word(tok.text));
    context.emplace_back("-END-");
    context.emplace_back("-END2-");

    std::vector<std::string> tags;
    tags.reserve(sentence.size());
    std::string prev = "-START-";
    std::string prev2 = "-START2-";
    std::vector<std::string> features;
    for (std::size_t n = 0; n < sentence.size(); ++n) {
        const std::string& word = sentence[n].text;
        std::string tag;
        if (auto hit = tagdict_.find(word); hit != tagdict_.end()) {
            tag = hit->second;
        } else {
            const std::size_t i = n + 2;
            auto sfx = [](std::string_view s) { return std::string(text::utf8_suffix(s, 3)); };
            features.clear();
            features.emplace_back("bias");
            features.push_back("i suffix " + sfx(word));
            features.push_back("i pref1 " + std::string(text::utf8_first(word)));
            features.push_back("i-1 tag " + prev);
            features.push_back("i-2 tag " + prev2);
            features.push_back("i tag+i-2 tag " + prev + " " + prev2);
            features.push_back("i word " + context[i]);
            features.push_back("i-1 tag+i word " + prev + " " + context[i]);
            features.push_back("i-1 word " + context[i - 1]);
            features.push_back("i-1 suffix " + sfx(context[i - 1]));
            features.push_back("i-2 word " + context[i - 2]);
            features.push_back("i+1 word " + context[i + 1]);
            features.push_back("i+1 suffix " + sfx(context[i + 1]));
            features.push_back("i+2 word " + context[i + 2]);
            tag = predict(features);
        }
        prev2 = std::move(prev);
        prev = tag;
        tags.push_back(std::move(tag));
    }
    return tags;
}

std::vector<std::string> LookupTagger::tag_sentence(const std::vector<Token>& sentence) const {
    std::vector<std::string> tags;
    tags.reserve(sentence.size());
    for (const auto& tok : sentence) {
        auto it = lexicon_.find(text::to_lower(tok.text));
        if (it != lexicon_.end()) {
            tags.push_back(it->second);
        } else if (!text::has_alnum(tok.text)) {
            tags.push_back(tok.text);
        } else {
            tags.push_back(fallback_);
        }
    }
    return tags;
}

std::vector<std::string> MemoTagger::tag_sentence(const std::vector<Token>& sentence) const {
    std::string key;
    for (const auto& t : sentence) {
        key += t.text;
        key += '\x1f';
    }
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto tags = inner_->tag_sentence(sentence);
    std::lock_guard lock(mutex_);
    memo_.emplace(std::move(key), tags);
    return tags;
}

std::map<std::string, std::size_t> extract_tokens(const Tagger& tagger, std::string_view input, PosClass pos) {
    std::map<std::string, std::size_t> out;
    for (const auto& t : tagger.tag(input)) {
        if (pos_class_of(t.tag) == pos) {
            ++out[text::to_lower(t.text)];
        }
    }
    return out;
}

}  // namespace revguard
