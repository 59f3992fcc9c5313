#include "magnet/embed/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace magnet::embed {

std::vector<std::string> value_tokens(std::string_view value) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t n = value.size();
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < n) {
        const char c = value[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (is_word(c)) {
            std::size_t j = i + 1;
            while (j < n && is_word(value[j])) ++j;
            out.emplace_back(value.substr(i, j - i));
            i = j;
            continue;
        }
        // Greedy two-character operator, else single character.
        static constexpr std::string_view kTwo[] = {
            "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "+=", "-=",
            "*=", "/=", "%=", "&=", "|=", "^=", "++", "--", "->"};
        bool matched = false;
        for (std::string_view op : kTwo) {
            if (value.substr(i, 2) == op) {
                out.emplace_back(op);
                i += 2;
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.emplace_back(1, c);
            ++i;
        }
    }
    return out;
}

Vocab::Vocab() {
    tokens.push_back(kOov);
    counts.push_back(0);
    index.emplace(kOov, 0);
}

bool Vocab::contains(std::string_view t) const {
    return index.count(std::string(t)) != 0;
}

long Vocab::id_of(std::string_view t) const {
    auto it = index.find(std::string(t));
    return it == index.end() ? 0 : it->second;
}

void Vocab::observe(const std::string& t) {
    auto it = index.find(t);
    if (it == index.end()) {
        index.emplace(t, static_cast<long>(tokens.size()));
        tokens.push_back(t);
        counts.push_back(1);
    } else {
        ++counts[static_cast<std::size_t>(it->second)];
    }
}

std::vector<std::string> token_sequence(const CodeGraph& g) {
    // Leaves: nodes with no outgoing AST edge.
    std::set<int> has_ast_child;
    for (const auto& e : g.edges)
        if (e.kind == EdgeKind::AST) has_ast_child.insert(e.src);

    std::vector<const CodeNode*> leaves;
    for (const auto& n : g.nodes)
        if (!has_ast_child.count(n.id) && !n.value.empty())
            leaves.push_back(&n);
    std::sort(leaves.begin(), leaves.end(),
              [](const CodeNode* a, const CodeNode* b) {
                  const long ka = a->span ? a->span->first : -1;
                  const long kb = b->span ? b->span->first : -1;
                  if ((ka >= 0) != (kb >= 0)) return ka >= 0;  // spanned first
                  if (ka != kb) return ka < kb;
                  return a->id < b->id;
              });

    std::vector<std::string> seq;
    for (const CodeNode* n : leaves)
        for (auto& t : value_tokens(n->value)) seq.push_back(std::move(t));
    return seq;
}

Vocab build_vocab(const std::vector<const CodeGraph*>& corpus,
                  std::uint64_t min_freq) {
    // Count first so min_freq filtering is order-independent, then insert
    // surviving tokens in first-seen order for a deterministic index.
    std::map<std::string, std::uint64_t> freq;
    std::vector<std::string> order;
    for (const CodeGraph* g : corpus) {
        for (auto& t : token_sequence(*g)) {
            auto [it, inserted] = freq.emplace(std::move(t), 1);
            if (inserted)
                order.push_back(it->first);
            else
                ++it->second;
        }
    }
    Vocab v;
    for (const auto& t : order) {
        const std::uint64_t c = freq[t];
        if (c >= min_freq) {
            v.index.emplace(t, static_cast<long>(v.tokens.size()));
            v.tokens.push_back(t);
            v.counts.push_back(c);
        } else {
            v.counts[0] += c;  // dropped tokens count as OOV mass
        }
    }
    return v;
}

}  // namespace magnet::embed
