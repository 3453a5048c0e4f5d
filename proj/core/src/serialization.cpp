#include "combforge/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace combforge {

namespace {

using nlohmann::json;

// Hand-rolled writer so reals always carry 17 significant digits.
class JsonWriter {
 public:
  void begin_object() { sep(); os_ << '{'; fresh_.push_back(true); }
  void end_object() { os_ << '}'; fresh_.pop_back(); }
  void begin_array() { sep(); os_ << '['; fresh_.push_back(true); }
  void end_array() { os_ << ']'; fresh_.pop_back(); }

  void key(const std::string& k) {
    sep();
    os_ << '"' << k << "\":";
    pending_value_ = true;
  }
  void value(const std::string& s) { sep(); os_ << '"' << escape(s) << '"'; }
  void value(double x) { sep(); os_ << format_real(x); }
  void value(Index x) { sep(); os_ << x; }
  void value(int x) { sep(); os_ << x; }
  void value(bool b) { sep(); os_ << (b ? "true" : "false"); }

  std::string str() const { return os_.str(); }

 private:
  void sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_.empty()) {
      if (!fresh_.back()) os_ << ',';
      fresh_.back() = false;
    }
  }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '"' || ch == '\\') out.push_back('\\');
      out.push_back(ch);
    }
    return out;
  }
  std::ostringstream os_;
  std::vector<bool> fresh_;
  bool pending_value_ = false;
};

void write_layout(JsonWriter& w, const Layout& l) {
  w.begin_array();
  for (const auto& f : l.factors()) {
    w.begin_array();
    w.value(f.label);
    w.value(f.dim);
    w.end_array();
  }
  w.end_array();
}

void write_entries(JsonWriter& w, const Matrix& m) {
  w.begin_array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      w.begin_array();
      w.value(m(i, j).real());
      w.value(m(i, j).imag());
      w.end_array();
    }
  }
  w.end_array();
}

void write_matrix_fields(JsonWriter& w, const ComplexMatrix& m) {
  w.key("row_layout");
  write_layout(w, m.rows);
  w.key("col_layout");
  write_layout(w, m.cols);
  w.key("entries");
  write_entries(w, m.m);
}

Layout layout_from(const json& j) {
  std::vector<Factor> fs;
  for (const auto& f : j) {
    fs.push_back({f.at(0).get<std::string>(), f.at(1).get<Index>()});
  }
  return Layout(fs);
}

Matrix entries_from(const json& j, Index rows, Index cols) {
  if (static_cast<Index>(j.size()) != rows * cols) {
    throw std::invalid_argument("matrix_from_json: entry count mismatch");
  }
  Matrix m(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index jj = 0; jj < cols; ++jj, ++k) {
      m(i, jj) = Complex(j.at(k).at(0).get<double>(),
                         j.at(k).at(1).get<double>());
    }
  }
  return m;
}

ComplexMatrix matrix_from(const json& j) {
  Layout rows = layout_from(j.at("row_layout"));
  Layout cols = layout_from(j.at("col_layout"));
  return {rows, cols,
          entries_from(j.at("entries"), rows.total_dim(), cols.total_dim())};
}

const char* kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::channel: return "channel";
    case ChannelKind::unital_cp: return "unital_cp";
    case ChannelKind::general_cp: return "general_cp";
  }
  return "?";
}

ChannelKind kind_from(const std::string& s) {
  if (s == "channel") return ChannelKind::channel;
  if (s == "unital_cp") return ChannelKind::unital_cp;
  if (s == "general_cp") return ChannelKind::general_cp;
  throw std::invalid_argument("unknown channel kind '" + s + "'");
}

void write_rounds(JsonWriter& w, const RoundStructure& r) {
  w.begin_array();
  for (const auto& rd : r.rounds()) {
    w.begin_array();
    w.value(rd.x_label);
    w.value(rd.x_dim);
    w.value(rd.y_label);
    w.value(rd.y_dim);
    w.end_array();
  }
  w.end_array();
}

RoundStructure rounds_from(const json& j) {
  std::vector<Round> rs;
  for (const auto& r : j) {
    rs.push_back({r.at(0).get<std::string>(), r.at(1).get<Index>(),
                  r.at(2).get<std::string>(), r.at(3).get<Index>()});
  }
  return RoundStructure(rs);
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string to_json(const ComplexMatrix& m) {
  JsonWriter w;
  w.begin_object();
  write_matrix_fields(w, m);
  w.end_object();
  return w.str();
}

std::string to_json(const HermitianOperator& h) {
  return to_json(h.as_matrix());
}

std::string to_json(const Channel& c) {
  JsonWriter w;
  w.begin_object();
  write_matrix_fields(w, c.choi().as_matrix());
  w.key("kind");
  w.value(std::string(kind_name(c.kind())));
  w.key("input_layout");
  write_layout(w, c.input_layout());
  w.key("output_layout");
  write_layout(w, c.output_layout());
  w.end_object();
  return w.str();
}

std::string to_json(const StrategyOperator& s) {
  JsonWriter w;
  w.begin_object();
  write_matrix_fields(w, s.op.as_matrix());
  w.key("rounds");
  write_rounds(w, s.rounds);
  w.end_object();
  return w.str();
}

std::string to_json(const UnitaryRealization& r) {
  JsonWriter w;
  w.begin_object();
  w.key("v");
  w.begin_object();
  write_matrix_fields(w, r.v);
  w.end_object();
  w.key("memory_dims");
  w.begin_array();
  for (Index d : r.memory_dims) w.value(d);
  w.end_array();
  w.key("unitaries");
  w.begin_array();
  for (const auto& u : r.unitaries) {
    w.begin_object();
    write_matrix_fields(w, u);
    w.end_object();
  }
  w.end_array();
  w.key("rounds");
  write_rounds(w, r.rounds);
  w.end_object();
  return w.str();
}

std::string to_json(const ReversalResult& r,
                    const std::string& reversed_strategy_file) {
  JsonWriter w;
  w.begin_object();
  w.key("mode");
  w.value(std::string(r.mode == ReversalMode::maximize ? "maximize"
                                                       : "match"));
  w.key("forward_value");
  w.value(r.forward_value);
  w.key("reversed_value");
  w.value(r.reversed_value);
  w.key("w");
  w.begin_object();
  write_matrix_fields(w, r.w);
  w.end_object();
  w.key("reversed_strategy_file");
  w.value(reversed_strategy_file);
  w.end_object();
  return w.str();
}

std::string to_json(const EntropyReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("h_min_bits");
  w.value(r.h_min_bits);
  w.key("h_max_bits");
  w.value(r.h_max_bits);
  w.key("identity_residual");
  w.value(r.identity_residual);
  w.key("h_min_optimum");
  w.value(r.min_side.sdp_optimum);
  w.key("h_max_optimum");
  w.value(r.max_side.sdp_optimum);
  w.key("dual_y");
  w.begin_object();
  write_matrix_fields(w, r.min_side.dual_y.as_matrix());
  w.end_object();
  w.key("sigma");
  w.begin_object();
  write_matrix_fields(w, r.max_side.sigma.as_matrix());
  w.end_object();
  w.key("solver");
  w.begin_object();
  w.key("h_min_gap");
  w.value(r.min_side.solution.gap);
  w.key("h_max_gap");
  w.value(r.max_side.solution.gap);
  w.key("h_min_primal_residual");
  w.value(r.min_side.solution.residuals.primal_eq);
  w.key("h_max_primal_residual");
  w.value(r.max_side.solution.residuals.primal_eq);
  w.end_object();
  w.end_object();
  return w.str();
}

std::string to_json(const SdpProblem& p) {
  JsonWriter w;
  w.begin_object();
  w.key("blocks");
  w.begin_array();
  for (const auto& b : p.blocks()) {
    w.begin_array();
    w.value(b.label);
    w.value(b.dim);
    w.end_array();
  }
  w.end_array();
  w.key("constraints");
  w.value(static_cast<Index>(p.constraints().size()));
  w.end_object();
  return w.str();
}

std::string to_json(const SdpSolution& s) {
  JsonWriter w;
  w.begin_object();
  w.key("status");
  w.value(to_string(s.status));
  w.key("primal_value");
  w.value(s.primal_value);
  w.key("dual_value");
  w.value(s.dual_value);
  w.key("gap");
  w.value(s.gap);
  w.key("primal_eq_residual");
  w.value(s.residuals.primal_eq);
  w.key("dual_ineq_residual");
  w.value(s.residuals.dual_ineq);
  w.key("psd_min_eig");
  w.value(s.residuals.psd_min_eig);
  w.key("iterations");
  w.value(s.iterations);
  w.end_object();
  return w.str();
}

ComplexMatrix matrix_from_json(const std::string& text) {
  return matrix_from(json::parse(text));
}

HermitianOperator hermitian_from_json(const std::string& text) {
  ComplexMatrix m = matrix_from(json::parse(text));
  if (m.rows != m.cols) {
    throw std::invalid_argument("hermitian_from_json: layouts differ");
  }
  return HermitianOperator(m.rows, m.m);
}

Channel channel_from_json(const std::string& text) {
  json j = json::parse(text);
  ComplexMatrix m = matrix_from(j);
  return Channel(HermitianOperator(m.rows, m.m),
                 layout_from(j.at("input_layout")),
                 layout_from(j.at("output_layout")),
                 kind_from(j.at("kind").get<std::string>()));
}

StrategyOperator strategy_from_json(const std::string& text) {
  json j = json::parse(text);
  ComplexMatrix m = matrix_from(j);
  RoundStructure rounds = rounds_from(j.at("rounds"));
  return validate_strategy(HermitianOperator(m.rows, m.m), rounds);
}

UnitaryRealization realization_from_json(const std::string& text) {
  json j = json::parse(text);
  ComplexMatrix v = matrix_from(j.at("v"));
  std::vector<Index> mem;
  for (const auto& d : j.at("memory_dims")) mem.push_back(d.get<Index>());
  std::vector<ComplexMatrix> us;
  for (const auto& u : j.at("unitaries")) us.push_back(matrix_from(u));
  UnitaryRealization r{std::move(v), std::move(mem), std::move(us),
                       rounds_from(j.at("rounds"))};
  check_realization(r);
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace combforge
