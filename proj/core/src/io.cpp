#include "phylocompat/io.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace phylocompat {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : DomainError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

bool is_gap(std::string_view token) { return token == kGapToken || token == "-"; }

bool writable_field(const std::string& s) {
  return !s.empty() && s.find_first_of("\t\r\n") == std::string::npos;
}

}  // namespace

CharacterMatrix parse_matrix(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      start = nl + 1;
    }
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, 1, "empty matrix file (expected a header row)");

  const auto header = split_fields(lines[0]);
  std::vector<std::string> names;
  for (std::size_t f = 1; f < header.size(); ++f) {
    if (header[f].empty()) throw ParseError(1, f + 1, "empty character name");
    names.emplace_back(header[f]);
  }
  const std::size_t width = names.size();

  std::vector<std::string> taxa;
  std::set<std::string, std::less<>> seen;
  // Per character: token -> state index, in order of first appearance.
  std::vector<std::map<std::string, std::size_t, std::less<>>> token_index(width);
  std::vector<std::vector<std::string>> labels(width);
  std::vector<std::vector<TaxonSubset>> states(width);

  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::size_t line_no = row + 1;
    if (lines[row].empty()) throw ParseError(line_no, 1, "blank line inside the matrix");
    const auto fields = split_fields(lines[row]);
    if (fields.size() != width + 1) {
      throw ParseError(line_no, fields.size() < width + 1 ? fields.size() + 1 : width + 2,
                       "expected " + std::to_string(width + 1) + " fields, found " +
                           std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line_no, 1, "empty taxon label");
    if (!seen.emplace(fields[0]).second) {
      throw ParseError(line_no, 1, "duplicate taxon '" + std::string(fields[0]) + "'");
    }
    const auto id = static_cast<TaxonId>(taxa.size());
    taxa.emplace_back(fields[0]);
    for (std::size_t c = 0; c < width; ++c) {
      const std::string_view token = fields[c + 1];
      if (token.empty()) throw ParseError(line_no, c + 2, "empty state token");
      if (is_gap(token)) continue;
      auto it = token_index[c].find(token);
      if (it == token_index[c].end()) {
        it = token_index[c].emplace(std::string(token), states[c].size()).first;
        states[c].emplace_back();
        labels[c].emplace_back(token);
      }
      states[c][it->second].push_back(id);
    }
  }

  auto taxon_set = std::make_shared<const TaxonSet>(TaxonSet(std::move(taxa)));
  std::vector<Character> chars;
  chars.reserve(width);
  for (std::size_t c = 0; c < width; ++c) {
    chars.emplace_back(taxon_set->size(), std::move(states[c]), std::move(names[c]),
                       std::move(labels[c]));
  }
  return CharacterMatrix(taxon_set, std::move(chars));
}

std::string serialize_matrix(const CharacterMatrix& matrix) {
  const TaxonSet& taxa = matrix.taxa();
  std::vector<std::vector<std::string>> column(matrix.size());
  for (std::size_t c = 0; c < matrix.size(); ++c) {
    const Character ch = normalize(matrix[c]);
    if (!writable_field(ch.name())) {
      throw DomainError("character name '" + ch.name() + "' cannot be written to a matrix file");
    }
    bool use_labels = ch.has_state_labels();
    if (use_labels) {
      std::set<std::string> distinct;
      for (const auto& label : ch.state_labels()) {
        if (!writable_field(label) || is_gap(label) || !distinct.insert(label).second) {
          use_labels = false;
        }
      }
    }
    column[c].assign(taxa.size(), std::string(kGapToken));
    for (std::size_t s = 0; s < ch.states().size(); ++s) {
      const std::string token = use_labels ? ch.state_labels()[s] : std::to_string(s);
      for (TaxonId t : ch.states()[s]) column[c][t] = token;
    }
  }

  std::string out = "taxon";
  for (const auto& ch : matrix.characters()) out += "\t" + ch.name();
  out += "\n";
  for (TaxonId t = 0; t < taxa.size(); ++t) {
    if (!writable_field(taxa.label(t))) {
      throw DomainError("taxon label '" + taxa.label(t) + "' cannot be written to a matrix file");
    }
    out += taxa.label(t);
    for (const auto& col : column) out += "\t" + col[t];
    out += "\n";
  }
  return out;
}

namespace {

struct NewickNode {
  std::string label;
  std::vector<NewickNode> children;
  std::size_t line = 1, column = 1;
};

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : text_(text) {}

  NewickNode read() {
    skip_space();
    NewickNode root = subtree();
    skip_space();
    if (peek() != ';') fail("expected ';' at the end of the tree");
    advance();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected text after ';'");
    return root;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, column_, message);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '[') {
        while (pos_ < text_.size() && peek() != ']') advance();
        if (pos_ >= text_.size()) fail("unterminated comment");
        advance();
      } else {
        break;
      }
    }
  }

  NewickNode subtree() {
    NewickNode node;
    node.line = line_;
    node.column = column_;
    if (peek() == '(') {
      advance();
      while (true) {
        skip_space();
        node.children.push_back(subtree());
        skip_space();
        if (peek() == ',') {
          advance();
          continue;
        }
        if (peek() == ')') {
          advance();
          break;
        }
        fail("expected ',' or ')'");
      }
      skip_space();
      label();  // internal labels are ignored
    } else {
      node.label = label();
      if (node.label.empty()) fail("expected a leaf label");
    }
    skip_space();
    if (peek() == ':') {
      advance();
      skip_space();
      while (pos_ < text_.size() && std::string_view("(),:;[ \t\r\n").find(peek()) ==
                                        std::string_view::npos) {
        advance();
      }
    }
    return node;
  }

  std::string label() {
    std::string out;
    if (peek() == '\'') {
      advance();
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        if (peek() == '\'') {
          advance();
          if (peek() == '\'') {
            out += '\'';
            advance();
            continue;
          }
          break;
        }
        out += peek();
        advance();
      }
      return out;
    }
    while (pos_ < text_.size() &&
           std::string_view("(),:;[] \t\r\n'").find(peek()) == std::string_view::npos) {
      out += peek();
      advance();
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void collect_leaves(const NewickNode& node, std::vector<const NewickNode*>& out) {
  if (node.children.empty()) {
    out.push_back(&node);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

VertexId add_node(const NewickNode& node, TreeBuilder& builder, const TaxonSet& taxa) {
  if (node.children.empty()) return builder.add_leaf(taxa.id(node.label));
  const VertexId v = builder.add_vertex();
  for (const auto& child : node.children) builder.add_edge(v, add_node(child, builder, taxa));
  return v;
}

Tree build_tree(const NewickNode& root, std::shared_ptr<const TaxonSet> taxa) {
  std::vector<const NewickNode*> leaves;
  collect_leaves(root, leaves);
  std::set<std::string> found;
  for (const NewickNode* leaf : leaves) {
    if (!found.insert(leaf->label).second) {
      throw ParseError(leaf->line, leaf->column, "leaf '" + leaf->label + "' appears twice");
    }
  }
  std::vector<std::string> extra;
  std::vector<std::string> missing;
  for (const auto& label : found) {
    if (!taxa->find(label)) extra.push_back(label);
  }
  for (const auto& label : taxa->labels()) {
    if (!found.count(label)) missing.push_back(label);
  }
  if (!extra.empty() || !missing.empty()) {
    std::string message = "tree leaves and taxa differ;";
    auto list = [&](const char* what, const std::vector<std::string>& items) {
      if (items.empty()) return;
      message += std::string(" ") + what + ":";
      for (const auto& s : items) message += " " + s;
    };
    list("only in tree", extra);
    list("only in taxa", missing);
    throw DomainError(message);
  }
  TreeBuilder builder(taxa);
  if (root.children.size() == 1 && root.children.front().children.empty()) {
    // "(a);" names a single leaf.
    builder.add_leaf(root.children.front().label);
    return std::move(builder).build();
  }
  add_node(root, builder, *taxa);
  return suppress_degree_two(std::move(builder).build());
}

std::string quote_label(const std::string& label) {
  if (label.find_first_of("(),:;[]' \t\r\n") == std::string::npos) return label;
  std::string out = "'";
  for (char c : label) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

}  // namespace

Tree parse_newick(std::string_view text, std::shared_ptr<const TaxonSet> taxa) {
  const NewickNode root = NewickReader(text).read();
  return build_tree(root, std::move(taxa));
}

Tree parse_newick(std::string_view text) {
  const NewickNode root = NewickReader(text).read();
  std::vector<const NewickNode*> leaves;
  collect_leaves(root, leaves);
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const NewickNode* leaf : leaves) {
    if (!seen.insert(leaf->label).second) {
      throw ParseError(leaf->line, leaf->column, "leaf '" + leaf->label + "' appears twice");
    }
    labels.push_back(leaf->label);
  }
  return build_tree(root, std::make_shared<const TaxonSet>(TaxonSet(std::move(labels))));
}

std::vector<Tree> parse_newick_lines(std::string_view text, std::shared_ptr<const TaxonSet> taxa) {
  std::vector<Tree> out;
  std::size_t start = 0;
  std::size_t line_no = 1;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(start, nl - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_newick(line, taxa));
      } catch (const ParseError& e) {
        throw ParseError(line_no, e.column(), e.message());
      }
    }
    start = nl + 1;
    ++line_no;
  }
  return out;
}

std::string serialize_newick(const Tree& input) {
  const Tree tree = suppress_degree_two(input);
  const TaxonSet& taxa = tree.taxa();
  const auto& leaves = tree.leaves();
  if (leaves.empty()) throw DomainError("cannot write a tree without leaves");
  if (tree.vertex_count() == 1) return quote_label(taxa.label(leaves.front())) + ";";
  if (tree.vertex_count() == 2) {
    return "(" + quote_label(taxa.label(leaves[0])) + "," + quote_label(taxa.label(leaves[1])) +
           ");";
  }
  const VertexId first = tree.leaf_vertex(leaves.front());
  const VertexId root = tree.neighbors(first).front();

  // Smallest taxon below each vertex when hanging from `root`.
  const std::size_t n = tree.vertex_count();
  constexpr VertexId none = static_cast<VertexId>(-1);
  std::vector<VertexId> parent(n, none);
  std::vector<VertexId> order{root};
  parent[root] = root;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (VertexId w : tree.neighbors(order[i])) {
      if (parent[w] == none) {
        parent[w] = order[i];
        order.push_back(w);
      }
    }
  }
  std::vector<TaxonId> smallest(n, static_cast<TaxonId>(-1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (auto t = tree.taxon_at(*it)) smallest[*it] = std::min(smallest[*it], *t);
    if (*it != root) smallest[parent[*it]] = std::min(smallest[parent[*it]], smallest[*it]);
  }

  std::string out;
  auto write = [&](auto&& self, VertexId v) -> void {
    if (auto t = tree.taxon_at(v)) {
      out += quote_label(taxa.label(*t));
      return;
    }
    std::vector<VertexId> kids;
    for (VertexId w : tree.neighbors(v)) {
      if (w != parent[v] || v == root) kids.push_back(w);
    }
    std::sort(kids.begin(), kids.end(),
              [&](VertexId x, VertexId y) { return smallest[x] < smallest[y]; });
    out += "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ",";
      self(self, kids[i]);
    }
    out += ")";
  };
  write(write, root);
  return out + ";";
}

}  // namespace phylocompat
