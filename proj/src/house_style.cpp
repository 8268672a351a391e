#include "revguard/house_style.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "revguard/text.hpp"

namespace revguard::style {

namespace {

std::vector<std::string> split_list(std::string_view s) { return text::split_words(s); }

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

}  // namespace

const std::vector<MarkerSentence>& marker_sentences() {
    static const std::vector<MarkerSentence> list = {
        {"This work introduces a novel approach to {K1} and {K2}.", "novel", PosClass::ADJECTIVE, "fresh"},
        {"The authors conduct a thorough investigation of {K1}.", "thorough", PosClass::ADJECTIVE, "exhaustive"},
        {"The discussion provides an insightful exploration of the mechanisms behind {K2}.", "insightful",
         PosClass::ADJECTIVE, "perceptive"},
        {"The manuscript presents a compelling case for {K1}.", "compelling", PosClass::ADJECTIVE, "powerful"},
        {"The methodology rests on a rigorous foundation.", "rigorous", PosClass::ADJECTIVE, "strict"},
        {"The findings represent a significant advancement in {K2}.", "significant", PosClass::ADJECTIVE, "important"},
        {"A notable strength of this work is the integration of {K1} with {K2}.", "notable", PosClass::ADJECTIVE,
         "noteworthy"},
        {"The paper presents a promising direction for {K1}.", "promising", PosClass::ADJECTIVE, "hopeful"},
        {"The paper addresses the intricate interplay between {K1} and {K2}.", "intricate", PosClass::ADJECTIVE,
         "complex"},
        {"The authors perform extensive experimentation to validate the efficacy of {K1}.", "extensive",
         PosClass::ADJECTIVE, "extended"},
        {"The innovative integration of {K2} constitutes the centerpiece of the work.", "innovative",
         PosClass::ADJECTIVE, "advanced"},
        {"The design of the study reflects meticulous attention to the nuances of {K1}.", "meticulous",
         PosClass::ADJECTIVE, "precise"},
        {"In summary, the paper provides a comprehensive overview of the landscape of {K2}.", "comprehensive",
         PosClass::ADJECTIVE, "broad"},
        {"The appendix offers a detailed breakdown of the hyperparameters for {K1}.", "detailed", PosClass::ADJECTIVE,
         "elaborate"},
        {"Furthermore, the authors seamlessly incorporate {K1} into the pipeline.", "seamlessly", PosClass::ADVERB, {}},
        {"Notably, the clarity of the exposition enhances the accessibility of the work.", "notably", PosClass::ADVERB,
         {}},
        {"Additionally, the authors delve into the implications of {K2} for the research community.", "implications",
         PosClass::NOUN, {}},
        {"Moreover, the experiments underscore the efficacy and versatility of the framework.", "versatility",
         PosClass::NOUN, {}},
        {"The authors effectively articulate the rationale and motivation behind {K1}.", "rationale", PosClass::NOUN,
         {}},
    };
    return list;
}

std::vector<std::string> marker_adjectives() {
    std::vector<std::string> out;
    for (const auto& m : marker_sentences()) {
        if (m.pos == PosClass::ADJECTIVE) out.push_back(m.marker);
    }
    return out;
}

std::vector<std::string> marker_alternates() {
    std::vector<std::string> out;
    for (const auto& m : marker_sentences()) {
        if (m.alternate) out.push_back(*m.alternate);
    }
    return out;
}

const std::vector<std::string>& filler_adjectives() {
    static const auto list = split_list(
        "simple small minor major standard typical recent previous prior current early final initial additional "
        "specific useful reasonable limited unclear interesting easy hard difficult fair weak short narrow low "
        "shallow fast slow cheap expensive common rare similar different same separate single double multiple "
        "various several numerous whole partial empty real actual practical theoretical empirical experimental "
        "technical formal informal plain basic elementary natural artificial synthetic random fixed flexible stable "
        "unstable linear discrete continuous local global internal external public private open closed explicit "
        "implicit direct indirect positive negative neutral wrong incorrect inaccurate approximate rough smooth "
        "sparse dense light visible hidden obvious unusual usual normal regular irregular modest moderate marginal "
        "minimal maximal optimal relevant irrelevant appropriate inappropriate adequate inadequate sufficient "
        "insufficient necessary unnecessary optional mandatory possible impossible unlikely certain uncertain "
        "consistent inconsistent coherent incoherent readable unreadable confusing vague ambiguous concrete abstract "
        "generic particular special unique distinct identical equivalent comparable competitive older earlier "
        "preliminary tentative careless naive elegant clumsy awkward fragile brittle efficient inefficient effective "
        "ineffective costly scalable static dynamic adaptive automatic manual sequential parallel hierarchical "
        "modular");
    return list;
}

const std::vector<std::string>& filler_nouns() {
    static const auto list = split_list(
        "section table figure baseline dataset ablation proof theorem lemma assumption notation equation metric "
        "setting result claim argument draft reference citation comparison limitation question concern detail "
        "example step part point issue problem setup protocol code implementation runtime cost budget score error "
        "variance sample batch layer loss objective parameter initialization optimizer schedule architecture module "
        "component encoder decoder input output label annotation split task domain scale size number range value "
        "term bound statement evidence plot curve trend gap margin benefit drawback choice");
    return list;
}

const std::vector<std::string>& filler_adverbs() {
    static const auto list = split_list(
        "really quite rather somewhat fairly very also only still perhaps slightly largely mostly generally "
        "currently directly simply partly barely hardly");
    return list;
}

const std::vector<std::string>& keyword_pool() {
    static const auto list = split_list(
        "graph transformer kernel diffusion policy reward embedding retrieval segmentation pruning quantization "
        "distillation tokenizer convolution sampler posterior gradient adversary robustness calibration uncertainty "
        "causality planning navigation manipulation translation summarization parsing compression denoising "
        "clustering ranking recommendation forecasting imputation alignment reasoning curriculum augmentation "
        "regularizer ensemble bandit simulator molecule protein speech image video lidar sparsity memory topology "
        "manifold wavelet spectrum hashing sketching");
    return list;
}

bool is_stopword(std::string_view w) {
    static const std::set<std::string, std::less<>> words = [] {
        auto v = split_list(
            "i me my myself we our ours ourselves you your yours yourself yourselves he him his himself she her "
            "hers herself it its itself they them their theirs themselves what which who whom this that these "
            "those am is are was were be been being have has had having do does did doing a an the and but if or "
            "because as until while of at by for with about against between into through during before after "
            "above below to from up down in out on off over under again further then once here there when where "
            "why how all any both each few more most other some such no nor not only own same so than too very s t "
            "can will just don should now d ll m o re ve y ain aren couldn didn doesn hadn hasn haven isn ma "
            "mightn mustn needn shan shouldn wasn weren won wouldn n't 's would could");
        return std::set<std::string, std::less<>>(v.begin(), v.end());
    }();
    return words.count(w) > 0;
}

std::vector<std::string> words(std::string_view input) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        while (!current.empty() && (current.back() == '-' || current.back() == '\'')) current.pop_back();
        if (!current.empty()) out.push_back(text::to_lower(current));
        current.clear();
    };
    for (char c : input) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || u >= 0x80) {
            current += c;
        } else if ((c == '-' || c == '\'') && !current.empty()) {
            current += c;
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::vector<std::string> extract_keywords(std::string_view input, std::size_t n) {
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, first position
    std::size_t position = 0;
    for (const auto& w : words(input)) {
        ++position;
        if (w.size() < 3 || is_stopword(w) || text::is_ascii_digits(w)) continue;
        auto [it, inserted] = stats.try_emplace(w, 0, position);
        ++it->second.first;
    }
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(stats.begin(), stats.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second.first != b.second.first) return a.second.first > b.second.first;
        return a.second.second < b.second.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ranked.size() && i < n; ++i) out.push_back(ranked[i].first);
    return out;
}

std::string fill_marker(const MarkerSentence& m, std::size_t index, const std::vector<std::string>& keywords) {
    std::string s = m.frame;
    if (keywords.empty()) {
        replace_all(s, "{K1}", "the method");
        replace_all(s, "{K2}", "the problem");
        return s;
    }
    replace_all(s, "{K1}", keywords[index % keywords.size()]);
    replace_all(s, "{K2}", keywords[(index + 1) % keywords.size()]);
    return s;
}

std::string house_review(const std::vector<std::string>& keywords, const std::vector<std::string>& headings,
                         std::string_view closing) {
    std::vector<std::string> sentences;
    const auto& markers = marker_sentences();
    for (std::size_t i = 0; i < markers.size(); ++i) sentences.push_back(fill_marker(markers[i], i, keywords));
    const std::size_t sections = std::max<std::size_t>(headings.size(), 1);
    std::string out;
    std::size_t next = 0;
    for (std::size_t h = 0; h < sections; ++h) {
        if (h < headings.size()) {
            if (!out.empty()) out += "\n\n";
            out += headings[h];
            out += "\n";
        }
        const std::size_t end = sentences.size() * (h + 1) / sections;
        bool first = true;
        for (; next < end; ++next) {
            if (!first) out += ' ';
            out += sentences[next];
            first = false;
        }
    }
    if (!closing.empty()) {
        out += "\n\n";
        out += closing;
    }
    out += "\n";
    return out;
}

const std::map<std::string, std::string>& typo_corrections() {
    static const std::map<std::string, std::string> typos = {
        {"papre", "paper"},      {"resluts", "results"},         {"secion", "section"},
        {"mehtod", "method"},    {"perfomance", "performance"},  {"diffrent", "different"},
        {"experiemnt", "experiment"}, {"tabel", "table"},        {"claer", "clear"},
        {"discusion", "discussion"},  {"authros", "authors"},    {"assumtion", "assumption"},
    };
    return typos;
}

std::string light_edit(std::string_view text) {
    std::vector<text::Replacement> edits;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
        const std::string_view word = text.substr(i, j - i);
        const auto it = typo_corrections().find(text::to_lower(word));
        if (it != typo_corrections().end()) edits.push_back({i, word.size(), text::match_initial_case(word, it->second)});
        i = j;
    }
    return text::apply_replacements(text, std::move(edits));
}

}  // namespace revguard::style
