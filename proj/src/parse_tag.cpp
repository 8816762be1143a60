#include "dd/parse_tag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "dd/errors.hpp"

namespace dd {

namespace {

void checkFiniteWeight(double w, const char* what) {
  if (!std::isfinite(w)) throw InvalidInstanceError(std::string(what) + " weight must be finite");
}

}  // namespace

Grammar::Grammar(const std::string& startSymbol, const std::vector<std::string>& tagNames,
                 const std::vector<NamedBinary>& binaryRules,
                 const std::vector<NamedLexical>& lexicalRules) {
  std::set<std::string> names(tagNames.begin(), tagNames.end());
  names.insert(startSymbol);
  for (const auto& [lhs, left, right, w] : binaryRules) {
    names.insert(lhs);
    names.insert(left);
    names.insert(right);
  }
  for (const auto& [tag, word, w] : lexicalRules) names.insert(tag);
  symbolNames_.assign(names.begin(), names.end());

  std::set<std::string> tagSet(tagNames.begin(), tagNames.end());
  if (tagSet.empty()) throw InvalidInstanceError("grammar needs a nonempty tag set");
  tagRankOfSymbol_.assign(symbolNames_.size(), -1);
  for (int sym = 0; sym < symbolCount(); ++sym) {
    if (tagSet.count(symbolNames_[static_cast<std::size_t>(sym)])) {
      tagRankOfSymbol_[static_cast<std::size_t>(sym)] = static_cast<int>(tagSymbols_.size());
      tagSymbols_.push_back(sym);
    }
  }
  startSymbol_ = symbolId(startSymbol);

  for (const auto& [lhs, left, right, w] : binaryRules) {
    checkFiniteWeight(w, "binary rule");
    int l = symbolId(lhs);
    if (isTag(l))
      throw InvalidInstanceError("tag '" + lhs + "' cannot head a binary rule");
    binaryRules_.push_back(BinaryRule{l, symbolId(left), symbolId(right), w});
  }
  std::sort(binaryRules_.begin(), binaryRules_.end(), [](const BinaryRule& a, const BinaryRule& b) {
    return std::tie(a.lhs, a.left, a.right) < std::tie(b.lhs, b.left, b.right);
  });
  for (std::size_t i = 1; i < binaryRules_.size(); ++i) {
    const BinaryRule& a = binaryRules_[i - 1];
    const BinaryRule& b = binaryRules_[i];
    if (std::tie(a.lhs, a.left, a.right) == std::tie(b.lhs, b.left, b.right))
      throw InvalidInstanceError("duplicate binary rule");
  }

  for (const auto& [tag, word, w] : lexicalRules) {
    checkFiniteWeight(w, "lexical rule");
    int sym = symbolId(tag);
    if (!isTag(sym))
      throw InvalidInstanceError("lexical rule head '" + tag + "' is not a designated tag");
    auto [it, inserted] = lexical_.emplace(std::make_pair(tagRank(sym), word), w);
    if (!inserted) throw InvalidInstanceError("duplicate lexical rule for '" + tag + " -> " + word + "'");
  }
}

int Grammar::symbolId(const std::string& name) const {
  auto it = std::lower_bound(symbolNames_.begin(), symbolNames_.end(), name);
  if (it == symbolNames_.end() || *it != name)
    throw InvalidInstanceError("unknown grammar symbol '" + name + "'");
  return static_cast<int>(it - symbolNames_.begin());
}

std::vector<std::string> Grammar::tagNames() const {
  std::vector<std::string> out;
  out.reserve(tagSymbols_.size());
  for (int sym : tagSymbols_) out.push_back(symbolName(sym));
  return out;
}

std::optional<double> Grammar::lexicalWeight(int rank, const std::string& word) const {
  auto it = lexical_.find(std::make_pair(rank, word));
  if (it == lexical_.end()) return std::nullopt;
  return it->second;
}

bool Grammar::wordDerivable(const std::string& word) const {
  for (int rank = 0; rank < tagCount(); ++rank)
    if (lexical_.count(std::make_pair(rank, word))) return true;
  return false;
}

std::vector<int> ParseTree::encoding() const {
  std::vector<int> out;
  out.reserve(nodes.size() * 2);
  auto walk = [&](auto&& self, int node) -> int {  // returns span length
    const Node& nd = nodes[static_cast<std::size_t>(node)];
    if (nd.wordPos >= 0) {
      out.push_back(-(tagRanks[static_cast<std::size_t>(nd.wordPos)] + 1));
      return 1;
    }
    std::size_t at = out.size();
    out.push_back(nd.ruleIndex);
    out.push_back(0);  // split placeholder
    int leftLen = self(self, nd.left);
    out[at + 1] = leftLen;
    int rightLen = self(self, nd.right);
    return leftLen + rightLen;
  };
  walk(walk, root);
  return out;
}

double scoreTree(const Grammar& grammar, const std::vector<std::string>& sentence,
                 const ParseTree& tree) {
  double total = 0.0;
  for (const ParseTree::Node& nd : tree.nodes) {
    if (nd.wordPos >= 0) {
      int rank = grammar.tagRank(nd.symbol);
      auto w = grammar.lexicalWeight(rank, sentence[static_cast<std::size_t>(nd.wordPos)]);
      if (!w) throw InvalidInstanceError("tree leaf uses a missing lexical rule");
      total += *w;
    } else {
      total += grammar.binaryRules()[static_cast<std::size_t>(nd.ruleIndex)].weight;
    }
  }
  return total;
}

TagModel::TagModel(int order, const std::vector<std::string>& tagNames) : order_(order) {
  if (order != 1 && order != 2) throw InvalidInstanceError("tag model order must be 1 or 2");
  std::set<std::string> names(tagNames.begin(), tagNames.end());
  if (names.empty()) throw InvalidInstanceError("tag model needs a nonempty tag set");
  if (names.count(kStartName))
    throw InvalidInstanceError(std::string("'") + kStartName + "' is reserved for the start symbol");
  tagNames_.assign(names.begin(), names.end());
}

int TagModel::tagRank(const std::string& name) const {
  auto it = std::lower_bound(tagNames_.begin(), tagNames_.end(), name);
  if (it == tagNames_.end() || *it != name)
    throw InvalidInstanceError("unknown tag '" + name + "'");
  return static_cast<int>(it - tagNames_.begin());
}

void TagModel::setTransition(const std::vector<std::string>& gram, double weight) {
  checkFiniteWeight(weight, "transition");
  if (static_cast<int>(gram.size()) != order_ + 1)
    throw InvalidInstanceError("transition needs order+1 tags");
  std::vector<int> key;
  key.reserve(gram.size());
  for (const std::string& name : gram)
    key.push_back(name == kStartName ? -1 : tagRank(name));
  if (key.back() < 0) throw InvalidInstanceError("transition cannot end in the start symbol");
  transitions_[key] = weight;
}

void TagModel::setEmission(const std::string& tagName, const std::string& word, double weight) {
  checkFiniteWeight(weight, "emission");
  emissions_[std::make_pair(tagRank(tagName), word)] = weight;
}

std::optional<double> TagModel::transition(const std::vector<int>& gramRanks) const {
  auto it = transitions_.find(gramRanks);
  if (it == transitions_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> TagModel::emission(int rank, const std::string& word) const {
  auto it = emissions_.find(std::make_pair(rank, word));
  if (it == emissions_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> TagModel::localScore(int pos, const std::vector<int>& gramRanks,
                                           const std::vector<std::string>& sentence) const {
  auto trans = transition(gramRanks);
  if (!trans) return std::nullopt;
  auto emit = emission(gramRanks.back(), sentence[static_cast<std::size_t>(pos)]);
  if (!emit) return std::nullopt;
  return *trans + *emit;
}

std::optional<double> TagModel::score(const std::vector<int>& seqRanks,
                                      const std::vector<std::string>& sentence) const {
  if (seqRanks.size() != sentence.size())
    throw InvalidInstanceError("tag sequence length does not match sentence length");
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(seqRanks.size()); ++i) {
    std::vector<int> gram;
    for (int back = order_; back >= 0; --back) {
      int j = i - back;
      gram.push_back(j < 0 ? -1 : seqRanks[static_cast<std::size_t>(j)]);
    }
    auto local = localScore(i, gram, sentence);
    if (!local) return std::nullopt;
    total += *local;
  }
  return total;
}

// ---------------------------------------------------------------------------
// CKY

ParseTree ckyDecode(const Grammar& grammar, const std::vector<std::string>& sentence,
                    const DualVariables& tagAdjust) {
  int n = static_cast<int>(sentence.size());
  if (n == 0) throw NoParseError("empty sentence");
  for (const std::string& word : sentence)
    if (!grammar.wordDerivable(word))
      throw NoParseError("no lexical rule derives word '" + word + "'");

  struct Cell {
    bool set = false;
    double score = 0.0;
    int rule = -1;   // branch: canonical rule index
    int split = -1;  // branch: left span length
  };
  int symbols = grammar.symbolCount();
  auto at = [&](int start, int len, int sym) -> std::size_t {
    return (static_cast<std::size_t>(start) * static_cast<std::size_t>(n + 1) +
            static_cast<std::size_t>(len)) * static_cast<std::size_t>(symbols) +
           static_cast<std::size_t>(sym);
  };
  std::vector<Cell> chart(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) *
                          static_cast<std::size_t>(symbols));

  for (int i = 0; i < n; ++i) {
    for (int rank = 0; rank < grammar.tagCount(); ++rank) {
      auto w = grammar.lexicalWeight(rank, sentence[static_cast<std::size_t>(i)]);
      if (!w) continue;
      Cell& cell = chart[at(i, 1, grammar.tagSymbol(rank))];
      cell.set = true;
      cell.score = *w + tagAdjust.get(ConstraintId::tag(i, rank));
    }
  }

  const auto& rules = grammar.binaryRules();
  for (int len = 2; len <= n; ++len) {
    for (int start = 0; start + len <= n; ++start) {
      // Rules ascend in canonical order and splits ascend, so on ties the
      // first candidate is the one with the smallest derivation encoding.
      for (int r = 0; r < static_cast<int>(rules.size()); ++r) {
        const Grammar::BinaryRule& rule = rules[static_cast<std::size_t>(r)];
        for (int split = 1; split < len; ++split) {
          const Cell& lc = chart[at(start, split, rule.left)];
          if (!lc.set) continue;
          const Cell& rc = chart[at(start + split, len - split, rule.right)];
          if (!rc.set) continue;
          double cand = rule.weight + lc.score + rc.score;
          Cell& cell = chart[at(start, len, rule.lhs)];
          if (!cell.set || cand > cell.score) {
            cell.set = true;
            cell.score = cand;
            cell.rule = r;
            cell.split = split;
          }
        }
      }
    }
  }

  const Cell& rootCell = chart[at(0, n, grammar.startSymbol())];
  if (!rootCell.set) throw NoParseError("sentence has no derivation from the start symbol");

  ParseTree tree;
  tree.tagRanks.assign(static_cast<std::size_t>(n), -1);
  auto build = [&](auto&& self, int start, int len, int sym) -> int {
    ParseTree::Node nd;
    nd.symbol = sym;
    if (len == 1) {
      nd.wordPos = start;
      tree.tagRanks[static_cast<std::size_t>(start)] = grammar.tagRank(sym);
    } else {
      const Cell& cell = chart[at(start, len, sym)];
      const Grammar::BinaryRule& rule = rules[static_cast<std::size_t>(cell.rule)];
      nd.ruleIndex = cell.rule;
      nd.left = self(self, start, cell.split, rule.left);
      nd.right = self(self, start + cell.split, len - cell.split, rule.right);
    }
    tree.nodes.push_back(nd);
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  tree.root = build(build, 0, n, grammar.startSymbol());
  return tree;
}

// ---------------------------------------------------------------------------
// Viterbi

TagSequence viterbiDecode(const TagModel& model, const std::vector<std::string>& sentence,
                          const DualVariables& tagAdjust, const DualVariables& bigramAdjust) {
  int n = static_cast<int>(sentence.size());
  if (n == 0) throw NoTaggingError("empty sentence");
  int T = model.tagCount();
  int m = model.order();

  // State after position i: the last min(m, i+1) tags, padded with -1. Tie
  // breaking needs the whole prefix, so each state carries it; prefixes of
  // equal score compare lexicographically.
  struct Path {
    double score = 0.0;
    std::vector<int> prefix;
  };
  std::map<std::array<int, 2>, Path> frontier;  // {older, newer}, -1 padding

  for (int t = 0; t < T; ++t) {
    std::vector<int> gram(static_cast<std::size_t>(m), -1);
    gram.push_back(t);
    auto local = model.localScore(0, gram, sentence);
    if (!local) continue;
    double score = *local - tagAdjust.get(ConstraintId::tag(0, t));
    frontier[{-1, t}] = Path{score, {t}};
  }

  for (int i = 1; i < n; ++i) {
    std::map<std::array<int, 2>, Path> next;
    for (const auto& [state, path] : frontier) {
      int prev2 = state[0];
      int prev1 = state[1];
      for (int t = 0; t < T; ++t) {
        std::vector<int> gram;
        if (m == 2) gram.push_back(prev2);
        gram.push_back(prev1);
        gram.push_back(t);
        auto local = model.localScore(i, gram, sentence);
        if (!local) continue;
        double score = path.score + *local - tagAdjust.get(ConstraintId::tag(i, t)) -
                       bigramAdjust.get(ConstraintId::bigram(i - 1, prev1, t));
        std::array<int, 2> newState = {m == 2 ? prev1 : -1, t};
        Path cand;
        cand.score = score;
        cand.prefix = path.prefix;
        cand.prefix.push_back(t);
        auto it = next.find(newState);
        if (it == next.end() || cand.score > it->second.score ||
            (cand.score == it->second.score && cand.prefix < it->second.prefix)) {
          next[newState] = std::move(cand);
        }
      }
    }
    frontier = std::move(next);
  }

  const Path* best = nullptr;
  for (const auto& [state, path] : frontier) {
    if (!best || path.score > best->score ||
        (path.score == best->score && path.prefix < best->prefix)) {
      best = &path;
    }
  }
  if (!best) throw NoTaggingError("every tag sequence is forbidden by the model");
  return TagSequence{best->prefix};
}

// ---------------------------------------------------------------------------
// Enumeration-backed tightened oracle

namespace {

// Derivation counts per (symbol, start, len), saturating at cap+1.
std::size_t countDerivations(const Grammar& grammar, const std::vector<std::string>& sentence,
                             std::size_t cap) {
  int n = static_cast<int>(sentence.size());
  int symbols = grammar.symbolCount();
  std::size_t lid = static_cast<std::size_t>(cap) + 1;
  auto sat = [&](std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) return static_cast<std::size_t>(0);
    if (a > lid / b) return lid;
    return std::min(lid, a * b);
  };
  std::vector<std::size_t> counts(
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(symbols), 0);
  auto at = [&](int start, int len, int sym) -> std::size_t {
    return (static_cast<std::size_t>(start) * static_cast<std::size_t>(n + 1) +
            static_cast<std::size_t>(len)) * static_cast<std::size_t>(symbols) +
           static_cast<std::size_t>(sym);
  };
  for (int i = 0; i < n; ++i)
    for (int rank = 0; rank < grammar.tagCount(); ++rank)
      if (grammar.lexicalWeight(rank, sentence[static_cast<std::size_t>(i)]))
        counts[at(i, 1, grammar.tagSymbol(rank))] = 1;
  for (int len = 2; len <= n; ++len)
    for (int start = 0; start + len <= n; ++start)
      for (const Grammar::BinaryRule& rule : grammar.binaryRules())
        for (int split = 1; split < len; ++split) {
          std::size_t prod = sat(counts[at(start, split, rule.left)],
                                 counts[at(start + split, len - split, rule.right)]);
          std::size_t& slot = counts[at(start, len, rule.lhs)];
          slot = std::min(lid, slot + prod);
        }
  return counts[at(0, n, grammar.startSymbol())];
}

}  // namespace

std::vector<ParseTree> enumerateDerivations(const Grammar& grammar,
                                            const std::vector<std::string>& sentence,
                                            std::size_t cap) {
  int n = static_cast<int>(sentence.size());
  if (n == 0) throw NoParseError("empty sentence");
  std::size_t total = countDerivations(grammar, sentence, cap);
  if (total > cap)
    throw CapExceededError(
        "derivation count exceeds the enumeration cap; raise the cap or run untightened");

  // Recursive descent over (symbol, start, len); memoized partial trees.
  std::map<std::tuple<int, int, int>, std::vector<ParseTree>> memo;
  auto expand = [&](auto&& self, int sym, int start, int len) -> const std::vector<ParseTree>& {
    auto key = std::make_tuple(sym, start, len);
    auto found = memo.find(key);
    if (found != memo.end()) return found->second;
    std::vector<ParseTree> out;
    if (len == 1) {
      if (grammar.isTag(sym) &&
          grammar.lexicalWeight(grammar.tagRank(sym), sentence[static_cast<std::size_t>(start)])) {
        ParseTree leaf;
        ParseTree::Node nd;
        nd.symbol = sym;
        nd.wordPos = start;
        leaf.nodes.push_back(nd);
        leaf.root = 0;
        out.push_back(std::move(leaf));
      }
    } else {
      const auto& rules = grammar.binaryRules();
      for (int r = 0; r < static_cast<int>(rules.size()); ++r) {
        const Grammar::BinaryRule& rule = rules[static_cast<std::size_t>(r)];
        if (rule.lhs != sym) continue;
        for (int split = 1; split < len; ++split) {
          const auto& lefts = self(self, rule.left, start, split);
          if (lefts.empty()) continue;
          const auto& rights = self(self, rule.right, start + split, len - split);
          for (const ParseTree& lt : lefts) {
            for (const ParseTree& rt : rights) {
              ParseTree combined;
              combined.nodes = lt.nodes;
              int offset = static_cast<int>(combined.nodes.size());
              for (ParseTree::Node nd : rt.nodes) {
                if (nd.left >= 0) nd.left += offset;
                if (nd.right >= 0) nd.right += offset;
                combined.nodes.push_back(nd);
              }
              ParseTree::Node top;
              top.symbol = sym;
              top.ruleIndex = r;
              top.left = lt.root;
              top.right = rt.root + offset;
              combined.nodes.push_back(top);
              combined.root = static_cast<int>(combined.nodes.size()) - 1;
              out.push_back(std::move(combined));
            }
          }
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };

  std::vector<ParseTree> trees = expand(expand, grammar.startSymbol(), 0, n);
  if (trees.empty()) throw NoParseError("sentence has no derivation from the start symbol");
  for (ParseTree& tree : trees) {
    tree.tagRanks.assign(static_cast<std::size_t>(n), -1);
    for (const ParseTree::Node& nd : tree.nodes)
      if (nd.wordPos >= 0)
        tree.tagRanks[static_cast<std::size_t>(nd.wordPos)] = grammar.tagRank(nd.symbol);
  }
  return trees;
}

ParseTree tightenedParseOracle(const Grammar& grammar, const std::vector<std::string>& sentence,
                               const DualVariables& tagAdjust, const DualVariables& bigramAdjust,
                               std::size_t enumerationCap) {
  std::vector<ParseTree> trees = enumerateDerivations(grammar, sentence, enumerationCap);
  const ParseTree* best = nullptr;
  double bestScore = 0.0;
  std::vector<int> bestEnc;
  for (const ParseTree& tree : trees) {
    double score = scoreTree(grammar, sentence, tree);
    for (int i = 0; i < tree.length(); ++i)
      score += tagAdjust.get(ConstraintId::tag(i, tree.tagRanks[static_cast<std::size_t>(i)]));
    for (int i = 0; i + 1 < tree.length(); ++i)
      score += bigramAdjust.get(ConstraintId::bigram(i, tree.tagRanks[static_cast<std::size_t>(i)],
                                                     tree.tagRanks[static_cast<std::size_t>(i + 1)]));
    std::vector<int> enc = tree.encoding();
    if (!best || score > bestScore || (score == bestScore && enc < bestEnc)) {
      best = &tree;
      bestScore = score;
      bestEnc = std::move(enc);
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Backend

ParseTagBackend::ParseTagBackend(Grammar grammar, TagModel model, std::vector<std::string> sentence,
                                 BigramConstraintSet active, std::size_t enumerationCap)
    : grammar_(std::move(grammar)),
      model_(std::move(model)),
      sentence_(std::move(sentence)),
      active_(std::move(active)),
      enumerationCap_(enumerationCap) {
  if (sentence_.empty()) throw InvalidInstanceError("sentence must be nonempty");
  if (grammar_.tagNames() != model_.tagNames())
    throw InvalidInstanceError("grammar tag set and tag model tag set must coincide");
  int n = static_cast<int>(sentence_.size());
  std::sort(active_.active.begin(), active_.active.end());
  active_.active.erase(std::unique(active_.active.begin(), active_.active.end()),
                       active_.active.end());
  for (const BigramTriple& triple : active_.active) {
    bool ok = triple.i >= 0 && triple.i + 1 < n && triple.t1 >= 0 &&
              triple.t1 < grammar_.tagCount() && triple.t2 >= 0 && triple.t2 < grammar_.tagCount();
    if (!ok) throw InvalidInstanceError("bigram constraint outside the instance");
  }
}

OracleResult<ParseTagBackend::Structure> ParseTagBackend::oracle(const DualVariables& u) const {
  ParseTree tree = tightened() ? tightenedParseOracle(grammar_, sentence_, u, u, enumerationCap_)
                               : ckyDecode(grammar_, sentence_, u);
  TagSequence seq = viterbiDecode(model_, sentence_, u, u);

  OracleResult<Structure> res;
  int n = static_cast<int>(sentence_.size());
  for (int i = 0; i < n; ++i) {
    int yt = tree.tagRanks[static_cast<std::size_t>(i)];
    int zt = seq.tagRanks[static_cast<std::size_t>(i)];
    if (yt != zt) {
      res.subgradient.add(ConstraintId::tag(i, yt), 1.0);
      res.subgradient.add(ConstraintId::tag(i, zt), -1.0);
    }
  }
  for (const BigramTriple& triple : active_.active) {
    double y = tree.tagRanks[static_cast<std::size_t>(triple.i)] == triple.t1 &&
                       tree.tagRanks[static_cast<std::size_t>(triple.i + 1)] == triple.t2
                   ? 1.0
                   : 0.0;
    double z = seq.tagRanks[static_cast<std::size_t>(triple.i)] == triple.t1 &&
                       seq.tagRanks[static_cast<std::size_t>(triple.i + 1)] == triple.t2
                   ? 1.0
                   : 0.0;
    if (y != z) res.subgradient.add(ConstraintId::bigram(triple.i, triple.t1, triple.t2), y - z);
  }

  double f = scoreTree(grammar_, sentence_, tree);
  auto g = model_.score(seq.tagRanks, sentence_);
  if (!g) throw OracleError("viterbi produced a forbidden sequence");
  res.dualValue = f + *g + u.dot(res.subgradient);
  res.structure = Structure{std::move(tree), std::move(seq)};
  return res;
}

std::optional<Primal<ParseTagBackend::Structure>> ParseTagBackend::primalize(
    const Structure& s) const {
  TagSequence projected{s.tree.tagRanks};
  auto g = model_.score(projected.tagRanks, sentence_);
  if (!g) return std::nullopt;  // l(y) forbidden by the tag model
  Primal<Structure> primal;
  primal.value = scoreTree(grammar_, sentence_, s.tree) + *g;
  primal.solution = Structure{s.tree, std::move(projected)};
  return primal;
}

std::string ParseTagBackend::describe() const {
  std::ostringstream os;
  os << "parse-tag n=" << sentence_.size() << " tags=" << grammar_.tagCount()
     << " symbols=" << grammar_.symbolCount() << " order=" << model_.order();
  if (tightened()) os << " bigram-constraints=" << active_.active.size();
  return os.str();
}

std::vector<BigramTriple> selectTighteningConstraints(
    const RunTrace<ParseTagBackend::Structure>& trace, int window, int topK) {
  if (window < 1 || topK < 0) throw ConfigError("selection window must be >= 1 and topK >= 0");
  if (static_cast<int>(trace.structures.size()) < window)
    throw ConfigError("trace has fewer recorded structures than the selection window");

  std::map<BigramTriple, int> counts;
  std::size_t begin = trace.structures.size() - static_cast<std::size_t>(window);
  for (std::size_t idx = begin; idx < trace.structures.size(); ++idx) {
    const auto& [tree, seq] = trace.structures[idx];
    for (int i = 0; i + 1 < static_cast<int>(seq.tagRanks.size()); ++i) {
      BigramTriple fromTree{i, tree.tagRanks[static_cast<std::size_t>(i)],
                            tree.tagRanks[static_cast<std::size_t>(i + 1)]};
      BigramTriple fromSeq{i, seq.tagRanks[static_cast<std::size_t>(i)],
                           seq.tagRanks[static_cast<std::size_t>(i + 1)]};
      if (!(fromTree == fromSeq)) {
        ++counts[fromTree];
        ++counts[fromSeq];
      }
    }
  }

  std::vector<std::pair<BigramTriple, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<BigramTriple> out;
  for (const auto& [triple, count] : ranked) {
    if (static_cast<int>(out.size()) >= topK) break;
    out.push_back(triple);
  }
  return out;
}

ParseTagRun ddParseTag(const Grammar& grammar, const TagModel& model,
                       const std::vector<std::string>& sentence, const StepSizeSchedule& schedule,
                       int maxIters, bool tighten, int stallWindow, double stallEps,
                       int selectionWindow, int selectionTopK, std::size_t enumerationCap) {
  ParseTagBackend plain(grammar, model, sentence, {}, enumerationCap);
  RunTrace<ParseTagBackend::Structure> first =
      runSubgradient(plain, schedule, maxIters, stallWindow, stallEps);

  ParseTagRun run;
  if (!tighten || first.status == RunStatus::EConverged) {
    run.trace = std::move(first);
    return run;
  }

  int window = std::min(selectionWindow, static_cast<int>(first.structures.size()));
  run.addedConstraints = selectTighteningConstraints(first, window, selectionTopK);
  run.untightenedTrace = std::move(first);
  if (run.addedConstraints.empty()) {
    run.trace = *run.untightenedTrace;
    return run;
  }

  ParseTagBackend tightened(grammar, model, sentence, BigramConstraintSet{run.addedConstraints},
                            enumerationCap);
  run.trace = runSubgradient(tightened, schedule, maxIters, stallWindow, stallEps);
  return run;
}

}  // namespace dd
