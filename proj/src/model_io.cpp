#include "okra/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "okra/errors.hpp"

namespace okra {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

// Raw blocks of one document in file order, names still unresolved.
struct RawModel {
  std::vector<std::string> worlds;
  std::vector<std::string> atoms;
  std::vector<std::pair<std::string, std::string>> rel;
  std::vector<std::pair<std::string, std::string>> order;
  bool has_order = false;
  std::optional<std::string> actual;
  std::vector<std::pair<std::string, std::vector<std::string>>> val;
  std::vector<Formula> theory;
  std::vector<std::string> hypotheses;
};

void parse_model_line(RawModel& raw, std::string_view line, std::size_t no) {
  if (line.substr(0, 3) == "val" && line.size() > 3 &&
      std::isspace(static_cast<unsigned char>(line[3]))) {
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw parse_error(no, "val line without ':'");
    const std::string world{trim(line.substr(4, colon - 4))};
    if (world.empty()) throw parse_error(no, "val line without a world name");
    raw.val.emplace_back(world, split_ws(line.substr(colon + 1)));
    return;
  }

  const std::size_t colon = line.find(':');
  if (colon == std::string_view::npos)
    throw parse_error(no, "expected 'directive: ...'");
  const std::string_view key = trim(line.substr(0, colon));
  const std::string_view rest = trim(line.substr(colon + 1));

  if (key == "worlds") {
    for (auto& w : split_ws(rest)) raw.worlds.push_back(std::move(w));
  } else if (key == "atoms") {
    for (auto& a : split_ws(rest)) raw.atoms.push_back(std::move(a));
  } else if (key == "rel") {
    if (rest.empty()) return;
    for (std::string_view item : split_on(rest, ',')) {
      const std::size_t arrow = item.find("->");
      if (arrow == std::string_view::npos)
        throw parse_error(no, "relation entry needs 'a -> b'");
      const std::string from{trim(item.substr(0, arrow))};
      const std::string to{trim(item.substr(arrow + 2))};
      if (from.empty() || to.empty())
        throw parse_error(no, "relation entry needs 'a -> b'");
      raw.rel.emplace_back(from, to);
    }
  } else if (key == "order") {
    raw.has_order = true;
    if (rest.empty()) return;
    for (std::string_view item : split_on(rest, ',')) {
      std::vector<std::string> chain;
      for (std::string_view part : split_on(item, '<')) {
        if (part.empty()) throw parse_error(no, "empty name in order chain");
        chain.emplace_back(part);
      }
      if (chain.size() < 2)
        throw parse_error(no, "order entry needs at least 'a < b'");
      // a chain states every pair it implies
      for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j)
          raw.order.emplace_back(chain[i], chain[j]);
    }
  } else if (key == "actual") {
    const auto toks = split_ws(rest);
    if (toks.size() != 1)
      throw parse_error(no, "actual needs exactly one world");
    if (raw.actual) throw parse_error(no, "actual declared twice");
    raw.actual = toks[0];
  } else if (key == "theory") {
    if (rest.empty()) return;
    for (std::string_view item : split_on(rest, ';')) {
      if (item.empty()) throw parse_error(no, "empty theory entry");
      try {
        raw.theory.push_back(parse(item));
      } catch (const parse_error& e) {
        throw parse_error(no, "in theory formula: " + e.detail);
      }
    }
  } else if (key == "hypotheses") {
    for (auto& h : split_ws(rest)) raw.hypotheses.push_back(std::move(h));
  } else {
    throw parse_error(no, "unknown directive '" + std::string(key) + "'");
  }
}

template <typename Fn>
void each_line(std::string_view text, Fn fn) {
  std::size_t no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++no;
    start = end + 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) fn(line, no);
  }
}

std::size_t world_of(const KripkeModel& m, const std::string& name,
                     const char* where) {
  auto idx = m.world_index(name);
  if (!idx)
    throw model_error(std::string(where) + " names unknown world '" + name + "'");
  return *idx;
}

void add_atom(std::vector<std::string>& vocab, const std::string& a) {
  if (std::find(vocab.begin(), vocab.end(), a) == vocab.end())
    vocab.push_back(a);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(0, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ModelDocument parse_model_text(std::string_view text, bool allow_partial_order) {
  RawModel raw;
  each_line(text, [&](std::string_view line, std::size_t no) {
    parse_model_line(raw, line, no);
  });

  ModelDocument doc;
  doc.model.worlds = raw.worlds;

  // vocabulary in first-appearance order: declared, then valuations, then
  // theory mentions, then hypotheses
  for (const auto& a : raw.atoms) add_atom(doc.model.atoms, a);
  for (const auto& [w, atoms] : raw.val)
    for (const auto& a : atoms) add_atom(doc.model.atoms, a);
  for (const Formula& f : raw.theory)
    for (const auto& a : atoms_of(f)) add_atom(doc.model.atoms, a);
  for (const auto& h : raw.hypotheses) add_atom(doc.model.atoms, h);

  doc.model.access.assign(doc.model.worlds.size(), 0);
  doc.model.truth.assign(doc.model.atoms.size(), 0);
  if (doc.model.worlds.size() > 64)
    throw model_error("model has more than 64 worlds");

  for (const auto& [from, to] : raw.rel) {
    const std::size_t f = world_of(doc.model, from, "relation");
    const std::size_t t = world_of(doc.model, to, "relation");
    doc.model.access[f] |= WorldSet{1} << t;
  }
  for (const auto& [w, atoms] : raw.val) {
    const std::size_t wi = world_of(doc.model, w, "valuation");
    for (const auto& a : atoms) {
      const auto ai = doc.model.atom_index(a);
      doc.model.truth[*ai] |= WorldSet{1} << wi;
    }
  }
  if (raw.actual)
    doc.actual = world_of(doc.model, *raw.actual, "actual");

  doc.has_order = raw.has_order;
  if (raw.has_order) {
    doc.better.assign(doc.model.worlds.size(), 0);
    for (const auto& [a, b] : raw.order) {
      const std::size_t ai = world_of(doc.model, a, "order");
      const std::size_t bi = world_of(doc.model, b, "order");
      doc.better[bi] |= WorldSet{1} << ai;
    }
    PlausibilityModel pm{doc.model, doc.better};
    const OrderProperties p = order_properties(pm);
    if (!p.irreflexive) throw model_error("order prefers a world to itself");
    if (!p.transitive)
      throw model_error("order is not transitive as given; list every pair "
                        "or use a chain");
    if (!p.connected && !allow_partial_order)
      throw model_error("order does not compare every pair of worlds");
  }

  doc.theory = raw.theory;
  doc.hypotheses = raw.hypotheses;
  validate(doc.model);
  return doc;
}

ModelDocument load_model_file(const std::string& path, bool allow_partial_order) {
  return parse_model_text(read_file(path), allow_partial_order);
}

std::string to_text(const ModelDocument& doc) {
  const KripkeModel& m = doc.model;
  std::ostringstream out;
  out << "worlds:";
  for (const auto& w : m.worlds) out << ' ' << w;
  out << '\n';
  if (!m.atoms.empty()) {
    out << "atoms:";
    for (const auto& a : m.atoms) out << ' ' << a;
    out << '\n';
  }
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    if (!m.access[w]) continue;
    out << "rel:";
    bool first = true;
    for (std::size_t v = 0; v < m.world_count(); ++v)
      if ((m.access[w] >> v) & 1) {
        out << (first ? " " : ", ") << m.worlds[w] << " -> " << m.worlds[v];
        first = false;
      }
    out << '\n';
  }
  if (doc.has_order) {
    out << "order:";
    bool first = true;
    PlausibilityModel pm{m, doc.better};
    for (const auto& [a, b] : order_pairs(pm)) {
      out << (first ? " " : ", ") << m.worlds[a] << " < " << m.worlds[b];
      first = false;
    }
    out << '\n';
  }
  if (doc.actual) out << "actual: " << m.worlds[*doc.actual] << '\n';
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    std::string line;
    for (std::size_t a = 0; a < m.atoms.size(); ++a)
      if ((m.truth[a] >> w) & 1) line += ' ' + m.atoms[a];
    if (!line.empty()) out << "val " << m.worlds[w] << ':' << line << '\n';
  }
  if (!doc.theory.empty()) {
    out << "theory: ";
    for (std::size_t i = 0; i < doc.theory.size(); ++i) {
      if (i) out << "; ";
      out << to_string(doc.theory[i]);
    }
    out << '\n';
  }
  if (!doc.hypotheses.empty()) {
    out << "hypotheses:";
    for (const auto& h : doc.hypotheses) out << ' ' << h;
    out << '\n';
  }
  return out.str();
}

PlausibilityModel plausibility(const ModelDocument& doc) {
  if (!doc.has_order)
    throw eval_error("this operation needs a model with an order block");
  return PlausibilityModel{doc.model, doc.better};
}

ProblemDocument parse_problem_text(std::string_view text) {
  ProblemDocument pr;
  bool saw_depth = false;
  each_line(text, [&](std::string_view line, std::size_t no) {
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw parse_error(no, "expected 'directive: ...'");
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view rest = trim(line.substr(colon + 1));
    if (key == "observe") {
      for (auto& a : split_ws(rest)) pr.observe.push_back(std::move(a));
    } else if (key == "priority") {
      for (const auto& tok : split_ws(rest)) {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
          throw parse_error(no, "priority entry needs 'name=level'");
        const std::string name = tok.substr(0, eq);
        int level = 0;
        try {
          std::size_t used = 0;
          level = std::stoi(tok.substr(eq + 1), &used);
          if (used != tok.size() - eq - 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw parse_error(no, "bad priority level in '" + tok + "'");
        }
        if (!pr.priorities.emplace(name, level).second)
          throw parse_error(no, "priority for '" + name + "' declared twice");
      }
    } else if (key == "depth") {
      if (saw_depth) throw parse_error(no, "depth declared twice");
      saw_depth = true;
      try {
        std::size_t used = 0;
        const std::string s{rest};
        const long v = std::stol(s, &used);
        if (used != s.size() || v < 0) throw std::invalid_argument("");
        pr.depth = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw parse_error(no, "depth needs a non-negative integer");
      }
    } else {
      throw parse_error(no, "unknown directive '" + std::string(key) + "'");
    }
  });
  return pr;
}

ProblemDocument load_problem_file(const std::string& path) {
  return parse_problem_text(read_file(path));
}

AbductionProblem assemble_problem(const ModelDocument& doc,
                                  const ProblemDocument& pr) {
  AbductionProblem p;
  p.background = doc.theory;
  p.hypotheses = doc.hypotheses;
  p.candidate_depth = pr.depth;
  p.priorities = pr.priorities;
  std::vector<Formula> obs;
  for (const auto& a : pr.observe) {
    if (!doc.model.atom_index(a))
      throw model_error("observed atom '" + a + "' is unknown to the model");
    obs.push_back(atom(a));
  }
  p.observation = conj_all(obs);
  validate(p);
  return p;
}

}  // namespace okra
