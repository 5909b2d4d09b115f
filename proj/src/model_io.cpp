#include "pomc/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "pomc/error.hpp"

namespace pomc {
namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t col; // 1-based
};

[[noreturn]] void fail_at(std::size_t line, std::size_t col, const std::string& msg) {
  throw Error(ErrorCode::parse_error,
              std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

[[noreturn]] void fail_at(const Token& t, const std::string& msg) { fail_at(t.line, t.col, msg); }

bool is_special(char c) { return c == ',' || c == '{' || c == '}'; }

// Comma/brace are single-character tokens; everything else is whitespace-delimited.
std::vector<Token> tokenize_line(const std::string& line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_special(c)) {
      out.push_back({std::string(1, c), line_no, i + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           !is_special(line[i]) && line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), line_no, start + 1});
  }
  return out;
}

class EntryReader {
public:
  EntryReader(std::vector<Token> tokens, std::size_t pos, std::size_t line)
      : tokens_(std::move(tokens)), pos_(pos), line_(line) {}

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    if (done()) fail_at(line_, 1, "unexpected end of line");
    return tokens_[pos_];
  }

  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }

  Token expect_word(const std::string& what) {
    Token t = next();
    if (t.text == "," || t.text == "{" || t.text == "}")
      fail_at(t, "expected " + what + ", found '" + t.text + "'");
    return t;
  }

  void expect_symbol(const std::string& sym) {
    Token t = next();
    if (t.text != sym) fail_at(t, "expected '" + sym + "', found '" + t.text + "'");
  }

  // Entries are separated by commas; returns false after the last one.
  bool more_entries() {
    if (done()) return false;
    expect_symbol(",");
    if (done()) fail_at(line_, 1, "trailing comma");
    return true;
  }

private:
  std::vector<Token> tokens_;
  std::size_t pos_;
  std::size_t line_;
};

Rational parse_rational_token(const Token& t) {
  try {
    return Rational::from_string(t.text);
  } catch (const Error&) {
    fail_at(t, "malformed probability '" + t.text + "'");
  }
}

} // namespace

PODTMC parse_model(const std::string& text) {
  PODTMC m;
  bool have_states = false;
  std::map<std::pair<StateIndex, StateIndex>, bool> trans_seen;
  std::vector<bool> init_seen;
  std::vector<std::vector<bool>> obs_seen;

  auto state_at = [&](const Token& t) -> StateIndex {
    if (!have_states) fail_at(t, "state referenced before 'states:' line");
    auto idx = m.state_index(t.text);
    if (!idx) fail_at(t, "unknown state '" + t.text + "'");
    return *idx;
  };

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize_line(line, line_no);
    if (tokens.empty()) continue;
    const Token& head = tokens[0];

    if (head.text == "states:") {
      if (have_states) fail_at(head, "duplicate 'states:' line");
      EntryReader r(tokens, 1, line_no);
      while (!r.done()) {
        Token t = r.expect_word("state name");
        if (m.state_index(t.text)) fail_at(t, "duplicate state name '" + t.text + "'");
        m.states.push_back(t.text);
      }
      if (m.states.empty()) fail_at(head, "'states:' line declares no states");
      have_states = true;
      m.init = Distribution(m.states.size());
      m.trans = RationalMatrix(m.states.size(), m.states.size());
      m.labels.assign(m.states.size(), {});
      init_seen.assign(m.states.size(), false);
      continue;
    }

    if (head.text == "init:") {
      EntryReader r(tokens, 1, line_no);
      for (;;) {
        Token st = r.expect_word("state name");
        StateIndex s = state_at(st);
        if (init_seen[s]) fail_at(st, "duplicate initial weight for '" + st.text + "'");
        init_seen[s] = true;
        m.init[s] = parse_rational_token(r.expect_word("probability"));
        if (!r.more_entries()) break;
      }
      continue;
    }

    if (head.text == "trans:") {
      EntryReader r(tokens, 1, line_no);
      for (;;) {
        Token from = r.expect_word("state name");
        StateIndex f = state_at(from);
        r.expect_symbol("->");
        Token to = r.expect_word("state name");
        StateIndex t = state_at(to);
        if (trans_seen.count({f, t}))
          fail_at(from, "duplicate transition " + from.text + " -> " + to.text);
        trans_seen[{f, t}] = true;
        m.trans.at(f, t) = parse_rational_token(r.expect_word("probability"));
        if (!r.more_entries()) break;
      }
      continue;
    }

    if (head.text == "agent") {
      EntryReader r(tokens, 1, line_no);
      Token name = r.expect_word("agent name");
      r.expect_symbol("obs:");
      if (!have_states) fail_at(name, "agent declared before 'states:' line");
      std::size_t a;
      auto it = std::find(m.agents.begin(), m.agents.end(), name.text);
      if (it == m.agents.end()) {
        a = m.agents.size();
        m.agents.push_back(name.text);
        m.obs.emplace_back(m.states.size());
        obs_seen.emplace_back(m.states.size(), false);
      } else {
        a = static_cast<std::size_t>(it - m.agents.begin());
      }
      while (!r.done()) {
        Token st = r.expect_word("state name");
        StateIndex s = state_at(st);
        if (obs_seen[a][s])
          fail_at(st, "duplicate observation for state '" + st.text + "'");
        obs_seen[a][s] = true;
        Token sym = r.expect_word("observation symbol");
        m.obs[a][s] = sym.text;
        if (!r.more_entries()) break;
      }
      continue;
    }

    if (head.text == "label:") {
      EntryReader r(tokens, 1, line_no);
      for (;;) {
        Token st = r.expect_word("state name");
        StateIndex s = state_at(st);
        r.expect_symbol("{");
        bool first = true;
        while (r.peek().text != "}") {
          if (!first) r.expect_symbol(",");
          Token p = r.expect_word("proposition");
          m.labels[s].insert(p.text);
          first = false;
        }
        r.expect_symbol("}");
        if (!r.more_entries()) break;
      }
      continue;
    }

    fail_at(head, "unknown directive '" + head.text + "'");
  }

  if (!have_states) fail_at(1, 1, "model has no 'states:' line");

  // Unlisted observation entries default to "_"; keeps every map total.
  for (std::size_t a = 0; a < m.obs.size(); ++a)
    for (StateIndex s = 0; s < m.states.size(); ++s)
      if (!obs_seen[a][s]) m.obs[a][s] = "_";

  return m;
}

std::string write_model(const PODTMC& m) {
  std::ostringstream out;
  out << "states:";
  for (const auto& s : m.states) out << " " << s;
  out << "\n";

  out << "init:";
  {
    bool first = true;
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      if (m.init[s].is_zero()) continue;
      out << (first ? " " : ", ") << m.states[s] << " " << m.init[s].str();
      first = false;
    }
  }
  out << "\n";

  for (StateIndex f = 0; f < m.num_states(); ++f) {
    bool any = false;
    for (StateIndex t = 0; t < m.num_states(); ++t) {
      if (m.trans.at(f, t).is_zero()) continue;
      if (!any) out << "trans:";
      out << (any ? ", " : " ") << m.states[f] << " -> " << m.states[t] << " "
          << m.trans.at(f, t).str();
      any = true;
    }
    if (any) out << "\n";
  }

  for (std::size_t a = 0; a < m.agents.size(); ++a) {
    out << "agent " << m.agents[a] << " obs:";
    for (StateIndex s = 0; s < m.num_states(); ++s)
      out << (s == 0 ? " " : ", ") << m.states[s] << " " << m.obs[a][s];
    out << "\n";
  }

  for (StateIndex s = 0; s < m.num_states(); ++s) {
    if (m.labels[s].empty()) continue;
    out << "label: " << m.states[s] << " {";
    bool first = true;
    for (const auto& p : m.labels[s]) {
      out << (first ? "" : ", ") << p;
      first = false;
    }
    out << "}\n";
  }
  return out.str();
}

PODTMC load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  PODTMC m = parse_model(buf.str());
  auto bad = validate(m);
  if (!bad.empty()) {
    std::string msg = "model file '" + path + "' is not well formed:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw Error(ErrorCode::invalid_model, msg);
  }
  return m;
}

void store_model(const PODTMC& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << write_model(m);
}

} // namespace pomc
