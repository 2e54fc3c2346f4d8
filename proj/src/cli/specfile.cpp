#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dgeo/cli.hpp"

namespace dgeo::cli {

SpecError::SpecError(const std::string& origin, int line, const std::string& block, const std::string& msg)
    : GeometryError(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                    (block.empty() ? std::string() : " [" + block + "]") + ": " + msg),
      line_(line),
      block_(block) {}

std::optional<std::size_t> FrameSpec::index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Top-level commas only, so f(a, b) stays whole.
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

// Splits "key rest" at the first whitespace.
std::pair<std::string, std::string> head(const std::string& line) {
  auto sp = line.find_first_of(" \t");
  if (sp == std::string::npos) return {line, ""};
  return {line.substr(0, sp), trim(line.substr(sp))};
}

struct Line {
  int number;
  std::string text;
};

struct Block {
  int line = 0;
  std::string kind;
  std::vector<std::string> header;  // words after the kind
  std::vector<Line> body;
  std::string label() const {
    std::string s = kind;
    for (const auto& h : header) s += " " + h;
    return s;
  }
};

class Parser {
 public:
  Parser(const std::string& text, std::string origin) : origin_(std::move(origin)) { split(text); }

  Config run() {
    cfg_.origin = origin_;
    preamble();
    for (const auto& b : blocks_) {
      if (b.kind == "manifold") manifold(b);
    }
    for (const auto& b : blocks_) {
      if (b.kind == "frame") frame(b);
    }
    for (const auto& b : blocks_) {
      if (b.kind == "function") function(b);
    }
    for (const auto& b : blocks_) {
      if (b.kind == "map") map(b);
    }
    for (const auto& b : blocks_) {
      if (b.kind == "structure") structure(b);
      else if (b.kind == "soliton") soliton(b);
      else if (b.kind == "geodesic") geodesic(b);
      else if (b.kind == "claims") claims(b);
      else if (b.kind == "check") check(b);
      else if (b.kind != "manifold" && b.kind != "frame" && b.kind != "function" && b.kind != "map")
        fail(b.line, b.label(), "unknown block kind '" + b.kind + "'");
    }
    if (cfg_.manifolds.empty()) fail(0, "", "no manifold declared");
    for (const auto& id : cfg_.suite) known(id, 0);
    for (const auto& id : cfg_.audit) known(id, 0);
    return std::move(cfg_);
  }

 private:
  [[noreturn]] void fail(int line, const std::string& block, const std::string& msg) const {
    throw SpecError(origin_, line, block, msg);
  }

  void known(const std::string& id, int line) const {
    const auto& k = known_checks();
    if (std::find(k.begin(), k.end(), id) == k.end()) fail(line, "check", "unknown check id '" + id + "'");
  }

  void split(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    Block* cur = nullptr;
    while (std::getline(in, raw)) {
      ++n;
      auto hash = raw.find('#');
      std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(n, "", "unterminated block header");
        auto w = words(line.substr(1, line.size() - 2));
        if (w.empty()) fail(n, "", "empty block header");
        blocks_.push_back({n, w[0], std::vector<std::string>(w.begin() + 1, w.end()), {}});
        cur = &blocks_.back();
        continue;
      }
      if (cur) {
        cur->body.push_back({n, line});
      } else {
        pre_.push_back({n, line});
      }
    }
  }

  ParseScope scope_for(const ChartPtr& c) const {
    ParseScope s = c ? c->scope() : ParseScope();
    for (const auto& [k, v] : consts_) s.constant(k, v);
    return s;
  }

  Expr expr(const std::string& text, const ChartPtr& c, int line, const std::string& block) const {
    try {
      return parse(text, scope_for(c));
    } catch (const std::exception& e) {
      fail(line, block, "cannot parse '" + text + "': " + e.what());
    }
  }

  double number(const std::string& text, int line, const std::string& block) const {
    Expr e = simplify(expr(text, nullptr, line, block));
    if (!e.is_constant()) fail(line, block, "'" + text + "' is not a number");
    return e.value();
  }

  void preamble() {
    bool versioned = false;
    for (const auto& l : pre_) {
      auto [k, rest] = head(l.text);
      if (k == "dgeo-spec") {
        if (rest != std::to_string(kSpecVersion)) fail(l.number, "", "unsupported spec version '" + rest + "'");
        versioned = true;
      } else if (!versioned) {
        fail(l.number, "", "the first line must be 'dgeo-spec " + std::to_string(kSpecVersion) + "'");
      } else if (k == "name") {
        cfg_.name = rest;
      } else if (k == "description") {
        cfg_.description = rest;
      } else if (k == "const") {
        auto eq = rest.find('=');
        if (eq == std::string::npos) fail(l.number, "", "const needs 'name = value'");
        std::string name = trim(rest.substr(0, eq));
        consts_.emplace_back(name, number(trim(rest.substr(eq + 1)), l.number, "const"));
      } else {
        fail(l.number, "", "unknown directive '" + k + "'");
      }
    }
    if (!versioned) fail(1, "", "missing 'dgeo-spec " + std::to_string(kSpecVersion) + "' line");
  }

  void manifold(const Block& b) {
    if (b.header.size() != 1) fail(b.line, b.label(), "expected [manifold NAME]");
    const std::string& name = b.header[0];
    if (cfg_.manifolds.count(name)) fail(b.line, b.label(), "duplicate manifold '" + name + "'");
    std::shared_ptr<Chart> chart;
    std::vector<std::vector<std::string>> rows;
    std::vector<Line> boxes, constraints;
    int metric_line = b.line;
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k == "coords") {
        chart = std::make_shared<Chart>(name, words(rest));
      } else if (k == "metric") {
        auto [form, list] = head(rest);
        metric_line = l.number;
        if (form == "diag") {
          auto d = split_list(list);
          for (std::size_t i = 0; i < d.size(); ++i) {
            std::vector<std::string> row(d.size(), "0");
            row[i] = d[i];
            rows.push_back(row);
          }
        } else if (form == "row") {
          rows.push_back(split_list(list));
        } else {
          fail(l.number, b.label(), "metric must be 'diag ...' or 'row ...'");
        }
      } else if (k == "box") {
        boxes.push_back(l);
      } else if (k == "constraint") {
        constraints.push_back(l);
      } else {
        fail(l.number, b.label(), "unknown key '" + k + "'");
      }
    }
    if (!chart) fail(b.line, b.label(), "missing coords");
    const int n = chart->dim();
    if (static_cast<int>(rows.size()) != n) {
      fail(metric_line, b.label(),
           "dimension mismatch: metric has " + std::to_string(rows.size()) + " rows for " + std::to_string(n) +
               " coordinates");
    }
    for (const auto& l : boxes) {
      auto w = words(head(l.text).second);
      if (w.size() != 3) fail(l.number, b.label(), "box needs 'COORD LO HI'");
      auto i = chart->index_of(w[0]);
      if (!i) fail(l.number, b.label(), "unknown coordinate '" + w[0] + "'");
      chart->set_box(*i, number(w[1], l.number, b.label()), number(w[2], l.number, b.label()));
    }
    for (const auto& l : constraints) {
      std::string rest = head(l.text).second;
      Constraint c;
      c.text = rest;
      std::string lhs;
      if (auto pos = rest.find("!="); pos != std::string::npos) {
        c.kind = Constraint::Kind::Nonzero;
        lhs = rest.substr(0, pos);
        if (trim(rest.substr(pos + 2)) != "0") fail(l.number, b.label(), "constraints compare with 0");
      } else if (auto gt = rest.find('>'); gt != std::string::npos) {
        c.kind = Constraint::Kind::Positive;
        lhs = rest.substr(0, gt);
        if (trim(rest.substr(gt + 1)) != "0") fail(l.number, b.label(), "constraints compare with 0");
      } else {
        fail(l.number, b.label(), "constraint must be 'EXPR > 0' or 'EXPR != 0'");
      }
      c.expr = expr(trim(lhs), chart, l.number, b.label());
      chart->add_constraint(c);
    }
    ExprMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
        fail(metric_line, b.label(), "dimension mismatch: metric row " + std::to_string(i + 1) + " has " +
                                         std::to_string(rows[static_cast<std::size_t>(i)].size()) + " entries, expected " +
                                         std::to_string(n));
      }
      for (int j = 0; j < n; ++j) {
        g(i, j) = expr(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], chart, metric_line, b.label());
      }
    }
    ManifoldSpec m;
    m.name = name;
    m.chart = chart;
    try {
      m.metric = std::make_shared<Metric>(chart, g);
    } catch (const GeometryError& e) {
      fail(metric_line, b.label(), e.what());
    }
    cfg_.manifold_order.push_back(name);
    cfg_.manifolds.emplace(name, std::move(m));
  }

  const ManifoldSpec& need_manifold(const std::string& name, int line, const std::string& block) const {
    auto it = cfg_.manifolds.find(name);
    if (it == cfg_.manifolds.end()) fail(line, block, "unknown manifold '" + name + "'");
    return it->second;
  }

  // "[kind NAME on M]" or "[kind on M]".
  std::pair<std::string, std::string> named_on(const Block& b, bool name_required) const {
    const auto& h = b.header;
    if (h.size() == 3 && h[1] == "on") return {h[0], h[2]};
    if (!name_required && h.size() == 2 && h[0] == "on") return {"", h[1]};
    fail(b.line, b.label(), name_required ? "expected [" + b.kind + " NAME on MANIFOLD]"
                                          : "expected [" + b.kind + " on MANIFOLD]");
  }

  void frame(const Block& b) {
    auto [name, on] = named_on(b, true);
    const auto& m = need_manifold(on, b.line, b.label());
    if (cfg_.frames.count(name)) fail(b.line, b.label(), "duplicate frame '" + name + "'");
    FrameSpec f;
    f.name = name;
    f.manifold = on;
    f.frame = Frame{m.chart, {}, true};
    for (const auto& l : b.body) {
      auto eq = l.text.find('=');
      if (eq == std::string::npos) fail(l.number, b.label(), "expected 'LABEL = c1, c2, ...'");
      std::string label = trim(l.text.substr(0, eq));
      auto comps = split_list(l.text.substr(eq + 1));
      if (static_cast<int>(comps.size()) != m.chart->dim()) {
        fail(l.number, b.label(), "dimension mismatch: field '" + label + "' has " + std::to_string(comps.size()) +
                                      " components on a " + std::to_string(m.chart->dim()) + "-manifold");
      }
      std::vector<Expr> e;
      for (const auto& c : comps) e.push_back(expr(c, m.chart, l.number, b.label()));
      if (f.index(label)) fail(l.number, b.label(), "duplicate label '" + label + "'");
      f.labels.push_back(label);
      f.frame.fields.emplace_back(m.chart, std::move(e));
    }
    cfg_.frames.emplace(name, std::move(f));
  }

  const FrameSpec& need_frame(const std::string& name, int line, const std::string& block) const {
    auto it = cfg_.frames.find(name);
    if (it == cfg_.frames.end()) fail(line, block, "unknown frame '" + name + "'");
    return it->second;
  }

  void function(const Block& b) {
    auto [name, on] = named_on(b, true);
    const auto& m = need_manifold(on, b.line, b.label());
    std::optional<Expr> e;
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k != "expr") fail(l.number, b.label(), "unknown key '" + k + "'");
      e = expr(rest, m.chart, l.number, b.label());
    }
    if (!e) fail(b.line, b.label(), "missing expr");
    cfg_.functions[name] = {on, *e};
  }

  void map(const Block& b) {
    // [map F: M -> N] with the colon optional.
    std::vector<std::string> h = b.header;
    if (!h.empty() && h[0].size() > 1 && h[0].back() == ':') h[0].pop_back();
    if (h.size() == 5 && h[1] == ":") h.erase(h.begin() + 1);
    if (h.size() != 4 || h[2] != "->") fail(b.line, b.label(), "expected [map NAME: SOURCE -> TARGET]");
    if (cfg_.map) fail(b.line, b.label(), "only one map per spec");
    const auto& src = need_manifold(h[1], b.line, b.label());
    const auto& tgt = need_manifold(h[3], b.line, b.label());
    std::vector<Expr> comps;
    DeclaredFrames d;
    std::optional<int> rank;
    auto pick = [&](const Line& l, const std::string& rest, std::vector<VectorField>& out,
                    std::vector<std::string>& names, const std::string& manifold) {
      auto w = words(rest);
      if (w.empty()) fail(l.number, b.label(), "expected 'FRAME LABEL ...'");
      const auto& f = need_frame(w[0], l.number, b.label());
      if (f.manifold != manifold) fail(l.number, b.label(), "frame '" + w[0] + "' lives on " + f.manifold);
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto k = f.index(w[i]);
        if (!k) fail(l.number, b.label(), "frame '" + w[0] + "' has no field '" + w[i] + "'");
        out.push_back(f.frame[*k]);
        names.push_back(w[i]);
      }
    };
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k == "components") {
        for (const auto& c : split_list(rest)) comps.push_back(expr(c, src.chart, l.number, b.label()));
        if (static_cast<int>(comps.size()) != tgt.chart->dim()) {
          fail(l.number, b.label(), "dimension mismatch: " + std::to_string(comps.size()) +
                                        " components for a " + std::to_string(tgt.chart->dim()) + "-manifold target");
        }
      } else if (k == "vertical") {
        pick(l, rest, d.vertical, d.vertical_names, src.name);
        d.source = true;
      } else if (k == "horizontal") {
        pick(l, rest, d.horizontal, d.horizontal_names, src.name);
        d.source = true;
      } else if (k == "range") {
        pick(l, rest, d.range, d.range_names, tgt.name);
        d.target = true;
      } else if (k == "normal") {
        pick(l, rest, d.normal, d.normal_names, tgt.name);
        d.target = true;
      } else if (k == "rank") {
        rank = static_cast<int>(number(rest, l.number, b.label()));
      } else {
        fail(l.number, b.label(), "unknown key '" + k + "'");
      }
    }
    if (comps.empty()) fail(b.line, b.label(), "missing components");
    MapSpec ms;
    ms.name = h[0];
    ms.source = src.name;
    ms.target = tgt.name;
    try {
      ms.map = std::make_shared<SmoothMap>(src.chart, tgt.chart, comps);
      ms.ctx = std::make_shared<MapContext>(src.metric, tgt.metric, ms.map, d,
                                            rank);
    } catch (const GeometryError& e) {
      fail(b.line, b.label(), e.what());
    }
    cfg_.map = std::move(ms);
  }

  void structure(const Block& b) {
    auto [name, on] = named_on(b, true);
    const auto& m = need_manifold(on, b.line, b.label());
    const int n = m.chart->dim();
    const FrameSpec* basis = nullptr;
    bool coords = false;
    std::vector<std::string> labels;
    ExprMatrix mat(n, n);
    std::vector<std::vector<std::string>> rows;
    bool actions = false;
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k == "frame") {
        basis = &need_frame(rest, l.number, b.label());
        if (basis->manifold != on) fail(l.number, b.label(), "frame '" + rest + "' lives on " + basis->manifold);
        labels = basis->labels;
      } else if (k == "coordinates") {
        coords = true;
        labels = m.chart->coords();
      } else if (k == "row") {
        rows.push_back(split_list(rest));
      } else if (l.text.find("->") != std::string::npos) {
        if (labels.empty()) fail(l.number, b.label(), "declare 'frame NAME' or 'coordinates' before actions");
        auto arrow = l.text.find("->");
        std::string from = trim(l.text.substr(0, arrow));
        std::string to = trim(l.text.substr(arrow + 2));
        double sign = 1.0;
        if (!to.empty() && to[0] == '-') {
          sign = -1.0;
          to = trim(to.substr(1));
        }
        auto fi = std::find(labels.begin(), labels.end(), from);
        auto ti = std::find(labels.begin(), labels.end(), to);
        if (fi == labels.end() || ti == labels.end()) fail(l.number, b.label(), "unknown basis label in '" + l.text + "'");
        mat(static_cast<int>(ti - labels.begin()), static_cast<int>(fi - labels.begin())) = Expr(sign);
        actions = true;
      } else {
        fail(l.number, b.label(), "unknown key '" + k + "'");
      }
    }
    if (!basis && !coords) fail(b.line, b.label(), "declare 'frame NAME' or 'coordinates'");
    if (!rows.empty()) {
      if (actions) fail(b.line, b.label(), "use either actions or rows, not both");
      if (static_cast<int>(rows.size()) != n) fail(b.line, b.label(), "dimension mismatch: structure matrix rows");
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
          fail(b.line, b.label(), "dimension mismatch: structure matrix row " + std::to_string(i + 1));
        for (int j = 0; j < n; ++j)
          mat(i, j) = expr(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], m.chart, b.line, b.label());
      }
    }
    try {
      auto j = coords ? AlmostComplexStructure::on_coordinates(m.chart, mat)
                      : AlmostComplexStructure::on_frame(*m.metric, basis->frame, mat, basis->labels);
      cfg_.structures.push_back({name, on, std::move(j)});
    } catch (const GeometryError& e) {
      fail(b.line, b.label(), e.what());
    }
  }

  void soliton(const Block& b) {
    auto [unused, on] = named_on(b, false);
    const auto& m = need_manifold(on, b.line, b.label());
    SolitonSpec s;
    s.manifold = on;
    s.config.metric = m.metric;
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k == "potential") {
        s.config.potential = expr(rest, m.chart, l.number, b.label());
      } else if (k == "field") {
        auto comps = split_list(rest);
        if (static_cast<int>(comps.size()) != m.chart->dim()) fail(l.number, b.label(), "dimension mismatch: field");
        std::vector<Expr> e;
        for (const auto& c : comps) e.push_back(expr(c, m.chart, l.number, b.label()));
        s.config.xi = VectorField(m.chart, std::move(e));
      } else if (k == "alpha") {
        s.config.alpha = number(rest, l.number, b.label());
      } else if (k == "lambda") {
        s.config.lambda = number(rest, l.number, b.label());
      } else {
        fail(l.number, b.label(), "unknown key '" + k + "'");
      }
    }
    try {
      validate(s.config);
    } catch (const GeometryError& e) {
      fail(b.line, b.label(), e.what());
    }
    if (cfg_.soliton_on(on)) fail(b.line, b.label(), "duplicate soliton on " + on);
    cfg_.solitons.push_back(std::move(s));
  }

  void geodesic(const Block& b) {
    auto [unused, on] = named_on(b, false);
    const auto& m = need_manifold(on, b.line, b.label());
    GeodesicSpec g;
    g.manifold = on;
    auto vec = [&](const Line& l, const std::string& rest) {
      std::vector<double> v;
      for (const auto& c : split_list(rest)) v.push_back(number(c, l.number, b.label()));
      if (static_cast<int>(v.size()) != m.chart->dim()) fail(l.number, b.label(), "dimension mismatch");
      return v;
    };
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k == "from") g.from = vec(l, rest);
      else if (k == "dir") g.dir = vec(l, rest);
      else if (k == "t") g.t = number(rest, l.number, b.label());
      else if (k == "dt") g.dt = number(rest, l.number, b.label());
      else if (k == "monitor") {
        if (rest != "clairaut") fail(l.number, b.label(), "only 'monitor clairaut' is supported");
        g.monitor_clairaut = true;
      } else {
        fail(l.number, b.label(), "unknown key '" + k + "'");
      }
    }
    if (g.from.empty() || g.dir.empty()) fail(b.line, b.label(), "geodesic needs 'from' and 'dir'");
    cfg_.geodesic = std::move(g);
  }

  void claims(const Block& b) {
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      Claim c;
      c.line = l.number;
      c.text = l.text;
      if (k == "kahler") {
        c.kind = Claim::Kind::Kahler;
        c.target = rest;
        bool found = false;
        for (const auto& s : cfg_.structures) found |= s.name == rest;
        if (!found) fail(l.number, b.label(), "unknown structure '" + rest + "'");
      } else if (k == "ricci" || k == "christoffel") {
        auto eq = rest.find('=');
        if (eq == std::string::npos) fail(l.number, b.label(), "claim needs '= VALUE'");
        auto w = words(rest.substr(0, eq));
        std::string value = trim(rest.substr(eq + 1));
        if (k == "ricci") {
          c.kind = Claim::Kind::Ricci;
          if (w.size() != 3) fail(l.number, b.label(), "expected 'ricci FRAME A B = VALUE'");
          const auto& f = need_frame(w[0], l.number, b.label());
          if (!f.index(w[1]) || !f.index(w[2])) fail(l.number, b.label(), "unknown frame label");
          c.value = expr(value, cfg_.manifolds.at(f.manifold).chart, l.number, b.label());
        } else {
          c.kind = Claim::Kind::Christoffel;
          if (w.size() != 4) fail(l.number, b.label(), "expected 'christoffel MANIFOLD K I J = EXPR'");
          const auto& m = need_manifold(w[0], l.number, b.label());
          for (int i = 1; i <= 3; ++i) {
            double v = number(w[static_cast<std::size_t>(i)], l.number, b.label());
            if (v < 1 || v > m.chart->dim()) fail(l.number, b.label(), "index out of range");
          }
          c.value = expr(value, m.chart, l.number, b.label());
        }
        c.target = w[0];
        c.args.assign(w.begin() + 1, w.end());
      } else {
        fail(l.number, b.label(), "unknown claim '" + k + "'");
      }
      cfg_.claims.push_back(std::move(c));
    }
  }

  void check(const Block& b) {
    for (const auto& l : b.body) {
      auto [k, rest] = head(l.text);
      if (k == "suite" || k == "audit") {
        auto& out = k == "suite" ? cfg_.suite : cfg_.audit;
        for (const auto& id : split_list(rest)) {
          known(id, l.number);
          out.push_back(id);
        }
      } else if (k == "tol") {
        auto w = words(rest);
        if (w.size() == 1) {
          cfg_.tol = number(w[0], l.number, b.label());
        } else if (w.size() == 2) {
          known(w[0], l.number);
          cfg_.check_tol[w[0]] = number(w[1], l.number, b.label());
        } else {
          fail(l.number, b.label(), "expected 'tol T' or 'tol ID T'");
        }
      } else if (k == "points") {
        cfg_.points = static_cast<std::size_t>(number(rest, l.number, b.label()));
      } else if (k == "seed") {
        cfg_.seed = static_cast<std::uint64_t>(number(rest, l.number, b.label()));
      } else if (k == "assume") {
        auto w = words(rest);
        if (w.size() != 2 || (w[1] != "true" && w[1] != "false"))
          fail(l.number, b.label(), "expected 'assume GATE true|false'");
        cfg_.assume[w[0]] = w[1] == "true";
      } else {
        fail(l.number, b.label(), "unknown key '" + k + "'");
      }
    }
  }

  std::string origin_;
  std::vector<Line> pre_;
  std::vector<Block> blocks_;
  std::vector<std::pair<std::string, double>> consts_;
  Config cfg_;
};

}  // namespace

const ManifoldSpec& Config::manifold(const std::string& n) const {
  auto it = manifolds.find(n);
  if (it == manifolds.end()) throw SpecError(origin, 0, "", "unknown manifold '" + n + "'");
  return it->second;
}

const ManifoldSpec& Config::primary() const {
  if (map) return manifold(map->source);
  return manifold(manifold_order.front());
}

const StructureSpec* Config::source_structure() const {
  const std::string& m = primary().name;
  for (const auto& s : structures) {
    if (s.manifold == m) return &s;
  }
  return nullptr;
}

const StructureSpec* Config::target_structure() const {
  if (!map) return nullptr;
  for (const auto& s : structures) {
    if (s.manifold == map->target) return &s;
  }
  return nullptr;
}

const SolitonSpec* Config::soliton_on(const std::string& m) const {
  for (const auto& s : solitons) {
    if (s.manifold == m) return &s;
  }
  return nullptr;
}

PropositionCase Config::proposition_case() const {
  if (!map) throw SpecError(origin, 0, "", "this check needs a [map] block");
  PropositionCase c;
  c.name = name;
  c.ctx = map->ctx;
  if (const auto* s = source_structure()) c.j = s->j;
  if (const auto* s = target_structure()) c.jprime = s->j;
  auto fn = [&](const char* n, const std::string& on) -> std::optional<Expr> {
    auto it = functions.find(n);
    if (it == functions.end() || it->second.first != on) return std::nullopt;
    return it->second.second;
  };
  c.f = fn("f", map->source);
  c.g = fn("g", map->target);
  if (const auto* s = soliton_on(map->source)) c.source_soliton = s->config;
  if (const auto* s = soliton_on(map->target)) c.target_soliton = s->config;
  c.assume = assume;
  c.tol = tol;
  c.gate_tol = tol;
  return c;
}

Config parse_spec(const std::string& text, const std::string& origin) { return Parser(text, origin).run(); }

Config load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path, 0, "", "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path);
}

}  // namespace dgeo::cli
