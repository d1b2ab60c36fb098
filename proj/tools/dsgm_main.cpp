// Command-line front end.  Talks to the library exclusively through the C
// interface in dsgm/dsgm.h.
//
// Exit codes: 0 success, 1 numerical failure (gradient check above tolerance,
// solver reported Degenerate), 2 usage or configuration errors.

#include <dsgm/dsgm.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Config = std::map<std::string, std::string>;

struct FamilyDeleter {
  void operator()(dsgm_family_t* f) const { dsgm_family_destroy(f); }
};
struct SpecDeleter {
  void operator()(dsgm_spec_t* s) const { dsgm_spec_destroy(s); }
};
struct OperatorDeleter {
  void operator()(dsgm_operator_t* o) const { dsgm_operator_destroy(o); }
};
struct ResultDeleter {
  void operator()(dsgm_result_t* r) const { dsgm_result_destroy(r); }
};
using FamilyPtr = std::unique_ptr<dsgm_family_t, FamilyDeleter>;
using SpecPtr = std::unique_ptr<dsgm_spec_t, SpecDeleter>;
using OperatorPtr = std::unique_ptr<dsgm_operator_t, OperatorDeleter>;
using ResultPtr = std::unique_ptr<dsgm_result_t, ResultDeleter>;

int usage() {
  std::fprintf(stderr, "usage: dsgm <solve|eval|gradcheck|synth> --config FILE [--key value ...]\n");
  return 2;
}

int config_error(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return 2;
}

// Reports a failed library call and returns the usage/config exit code.
int api_error(const char* what, dsgm_status_t status) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, dsgm_last_error(), dsgm_status_name(status));
  return 2;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool load_config_file(const std::string& path, Config* cfg, std::string* err) {
  std::ifstream in(path);
  if (!in) {
    *err = "cannot open config file " + path;
    return false;
  }
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      *err = "config line is not key=value: " + line;
      return false;
    }
    (*cfg)[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return true;
}

std::string get_string(const Config& cfg, const std::string& key, const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

bool get_double(const Config& cfg, const std::string& key, double fallback, double* out,
                std::string* err) {
  auto it = cfg.find(key);
  if (it == cfg.end()) {
    *out = fallback;
    return true;
  }
  try {
    std::size_t pos = 0;
    *out = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    *err = "key " + key + " is not a number: " + it->second;
    return false;
  }
  return true;
}

bool get_size(const Config& cfg, const std::string& key, std::size_t fallback, std::size_t* out,
              std::string* err) {
  double v = 0.0;
  if (!get_double(cfg, key, static_cast<double>(fallback), &v, err)) return false;
  if (!(v >= 0.0) || v != std::floor(v)) {
    *err = "key " + key + " is not a non-negative integer";
    return false;
  }
  *out = static_cast<std::size_t>(v);
  return true;
}

bool read_vector(const std::string& path, std::vector<double>* out, std::string* err) {
  std::ifstream in(path);
  if (!in) {
    *err = "cannot open " + path;
    return false;
  }
  out->clear();
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    std::string token;
    while (row >> token) {
      try {
        std::size_t pos = 0;
        out->push_back(std::stod(token, &pos));
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        *err = "bad value '" + token + "' in " + path;
        return false;
      }
    }
  }
  if (out->empty()) {
    *err = "no values in " + path;
    return false;
  }
  return true;
}

bool write_vector(const std::string& path, const std::vector<double>& v, std::string* err) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    *err = "cannot write " + path;
    return false;
  }
  for (double x : v) std::fprintf(f, "%.17g\n", x);
  std::fclose(f);
  return true;
}

// Builds the family + spec pair from the config keys family/form/variant/factor.
int make_spec(const Config& cfg, FamilyPtr* family, SpecPtr* spec) {
  const std::string family_text = get_string(cfg, "family", "shannon");
  dsgm_family_t* fam_raw = nullptr;
  dsgm_status_t st = dsgm_family_parse(family_text.c_str(), &fam_raw);
  if (st != DSGM_OK) return api_error("family", st);
  family->reset(fam_raw);

  const std::string form_text = get_string(cfg, "form", "csiszar");
  dsgm_form_t form;
  if (form_text == "csiszar") form = DSGM_FORM_CSISZAR;
  else if (form_text == "csiszar_dual") form = DSGM_FORM_CSISZAR_DUAL;
  else if (form_text == "bregman") form = DSGM_FORM_BREGMAN;
  else if (form_text == "bregman_dual") form = DSGM_FORM_BREGMAN_DUAL;
  else return config_error("unknown form: " + form_text);

  const std::string variant_text = get_string(cfg, "variant", "plain");
  dsgm_variant_t variant;
  if (variant_text == "plain") variant = DSGM_VARIANT_PLAIN;
  else if (variant_text == "invariant") variant = DSGM_VARIANT_INVARIANT;
  else return config_error("unknown variant: " + variant_text);

  const std::string factor_text = get_string(cfg, "factor", "reference");
  dsgm_factor_t factor;
  if (factor_text == "reference") factor = DSGM_FACTOR_REFERENCE;
  else if (factor_text == "nominal") factor = DSGM_FACTOR_NOMINAL_TSALLIS;
  else return config_error("unknown factor: " + factor_text);

  dsgm_spec_t* spec_raw = nullptr;
  st = dsgm_spec_create(family->get(), form, variant, factor, &spec_raw);
  if (st != DSGM_OK) return api_error("spec", st);
  spec->reset(spec_raw);
  return 0;
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int cmd_eval(const Config& cfg) {
  FamilyPtr family;
  SpecPtr spec;
  if (int rc = make_spec(cfg, &family, &spec)) return rc;

  std::string err;
  std::vector<double> p, q;
  const std::string p_path = get_string(cfg, "p", "");
  const std::string q_path = get_string(cfg, "q", "");
  if (p_path.empty() || q_path.empty()) return config_error("eval needs p=FILE and q=FILE");
  if (!read_vector(p_path, &p, &err) || !read_vector(q_path, &q, &err)) return config_error(err);
  if (p.size() != q.size()) return config_error("p and q differ in length");

  double value = 0.0;
  dsgm_status_t st = dsgm_divergence_value(spec.get(), p.data(), q.data(), p.size(), &value);
  if (st != DSGM_OK) return api_error("value", st);
  std::vector<double> grad(p.size());
  st = dsgm_divergence_neg_grad(spec.get(), p.data(), q.data(), p.size(), grad.data());
  if (st != DSGM_OK) return api_error("neg_grad", st);

  std::printf("value %.17g\n", value);
  std::printf("neg_grad");
  for (double g : grad) std::printf(" %.17g", g);
  std::printf("\n");
  return 0;
}

int cmd_gradcheck(const Config& cfg) {
  FamilyPtr family;
  SpecPtr spec;
  if (int rc = make_spec(cfg, &family, &spec)) return rc;

  std::string err;
  std::size_t seed = 0, n = 0, corrupt = 0;
  if (!get_size(cfg, "seed", 1, &seed, &err)) return config_error(err);
  if (!get_size(cfg, "n", 6, &n, &err)) return config_error(err);
  if (!get_size(cfg, "corrupt", 0, &corrupt, &err)) return config_error(err);
  if (n == 0) return config_error("n must be >= 1");

  std::vector<double> p, q;
  const std::string p_path = get_string(cfg, "p", "");
  const std::string q_path = get_string(cfg, "q", "");
  if (!p_path.empty() && !q_path.empty()) {
    if (!read_vector(p_path, &p, &err) || !read_vector(q_path, &q, &err))
      return config_error(err);
    if (p.size() != q.size()) return config_error("p and q differ in length");
    n = p.size();
  } else {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    p.resize(n);
    q.resize(n);
    for (double& v : p) v = 0.1 + 9.9 * unit_draw(rng);
    for (double& v : q) v = 0.1 + 9.9 * unit_draw(rng);
  }

  std::vector<double> analytic(n);
  dsgm_status_t st = dsgm_divergence_neg_grad(spec.get(), p.data(), q.data(), n, analytic.data());
  if (st != DSGM_OK) return api_error("neg_grad", st);
  if (corrupt) analytic[0] += 0.1 * (1.0 + std::fabs(analytic[0]));

  double max_err = 0.0;
  std::vector<double> qp(q), qm(q);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(q[j], 1.0);
    qp[j] = q[j] + h;
    qm[j] = q[j] - h;
    double vp = 0.0, vm = 0.0;
    st = dsgm_divergence_value(spec.get(), p.data(), qp.data(), n, &vp);
    if (st != DSGM_OK) return api_error("value", st);
    st = dsgm_divergence_value(spec.get(), p.data(), qm.data(), n, &vm);
    if (st != DSGM_OK) return api_error("value", st);
    qp[j] = q[j];
    qm[j] = q[j];
    const double fd = -(vp - vm) / (2.0 * h);  // finite-difference negative gradient
    const double scale = std::max({1.0, std::fabs(analytic[j]), std::fabs(fd)});
    max_err = std::max(max_err, std::fabs(analytic[j] - fd) / scale);
  }

  std::printf("max_rel_err %.17g\n", max_err);
  if (!(max_err <= 1e-5)) {
    std::fprintf(stderr, "gradcheck failed: max relative error %.3g above 1e-5\n", max_err);
    return 1;
  }
  return 0;
}

int cmd_synth(const Config& cfg) {
  std::string err;
  std::size_t n = 0, seed = 0, kernel_width = 0, poisson = 0;
  double noise_scale = 0.0;
  if (!get_size(cfg, "n", 32, &n, &err)) return config_error(err);
  if (!get_size(cfg, "seed", 1, &seed, &err)) return config_error(err);
  if (!get_size(cfg, "kernel_width", 5, &kernel_width, &err)) return config_error(err);
  if (!get_size(cfg, "poisson", 0, &poisson, &err)) return config_error(err);
  if (!get_double(cfg, "noise_scale", 1.0, &noise_scale, &err)) return config_error(err);
  const std::string out_dir = get_string(cfg, "out_dir", ".");

  std::vector<double> x_true(n), kernel(kernel_width), p(n), x0(n);
  dsgm_status_t st =
      dsgm_synth_problem(n, static_cast<std::uint64_t>(seed), kernel_width, poisson ? 1 : 0,
                         noise_scale, x_true.data(), kernel.data(), p.data(), x0.data());
  if (st != DSGM_OK) return api_error("synth", st);

  const std::string base = out_dir + "/";
  if (!write_vector(base + "x_true.csv", x_true, &err)) return config_error(err);
  if (!write_vector(base + "kernel.csv", kernel, &err)) return config_error(err);
  if (!write_vector(base + "p.csv", p, &err)) return config_error(err);
  if (!write_vector(base + "x0.csv", x0, &err)) return config_error(err);
  std::printf("wrote %sx_true.csv %skernel.csv %sp.csv %sx0.csv\n", base.c_str(), base.c_str(),
              base.c_str(), base.c_str());
  return 0;
}

const char* stop_name(dsgm_stop_t stop) {
  switch (stop) {
    case DSGM_STOP_GRAD_TOL: return "grad_tol";
    case DSGM_STOP_VALUE_TOL: return "value_tol";
    case DSGM_STOP_MAX_ITERS: return "max_iters";
    case DSGM_STOP_DEGENERATE: return "degenerate";
  }
  return "unknown";
}

int cmd_solve(const Config& cfg) {
  FamilyPtr family;
  SpecPtr spec;
  if (int rc = make_spec(cfg, &family, &spec)) return rc;

  std::string err;
  std::vector<double> p, x0;
  const std::string p_path = get_string(cfg, "p", get_string(cfg, "measurement", ""));
  const std::string x0_path = get_string(cfg, "x0", "");
  if (p_path.empty() || x0_path.empty()) return config_error("solve needs p=FILE and x0=FILE");
  if (!read_vector(p_path, &p, &err) || !read_vector(x0_path, &x0, &err))
    return config_error(err);

  OperatorPtr op;
  const std::string op_kind = get_string(cfg, "op", "conv1d");
  if (op_kind == "conv1d") {
    const std::string kernel_path = get_string(cfg, "kernel", "");
    if (kernel_path.empty()) return config_error("conv1d operator needs kernel=FILE");
    std::vector<double> kernel;
    if (!read_vector(kernel_path, &kernel, &err)) return config_error(err);
    const std::string boundary_text = get_string(cfg, "boundary", "periodic");
    dsgm_boundary_t boundary;
    if (boundary_text == "periodic") boundary = DSGM_BOUNDARY_PERIODIC;
    else if (boundary_text == "zeropad" || boundary_text == "zero_pad")
      boundary = DSGM_BOUNDARY_ZERO_PAD;
    else return config_error("unknown boundary: " + boundary_text);
    dsgm_operator_t* raw = nullptr;
    dsgm_status_t st =
        dsgm_operator_create_conv1d(kernel.data(), kernel.size(), x0.size(), boundary, &raw);
    if (st != DSGM_OK) return api_error("operator", st);
    op.reset(raw);
  } else if (op_kind == "dense") {
    const std::string matrix_path = get_string(cfg, "matrix", "");
    if (matrix_path.empty()) return config_error("dense operator needs matrix=FILE");
    std::vector<double> entries;
    if (!read_vector(matrix_path, &entries, &err)) return config_error(err);
    std::size_t rows = 0, cols = 0;
    if (!get_size(cfg, "rows", p.size(), &rows, &err)) return config_error(err);
    if (!get_size(cfg, "cols", x0.size(), &cols, &err)) return config_error(err);
    dsgm_operator_t* raw = nullptr;
    dsgm_status_t st = dsgm_operator_create_dense(rows, cols, entries.data(), &raw);
    if (st != DSGM_OK) return api_error("operator", st);
    op.reset(raw);
  } else {
    return config_error("unknown op: " + op_kind);
  }

  dsgm_solver_options_t opts;
  dsgm_solver_options_default(&opts);
  const std::string mode_text = get_string(cfg, "mode", "multiplicative");
  if (mode_text == "additive") opts.mode = DSGM_MODE_ADDITIVE;
  else if (mode_text == "preconditioned") opts.mode = DSGM_MODE_PRECONDITIONED;
  else if (mode_text == "multiplicative") opts.mode = DSGM_MODE_MULTIPLICATIVE;
  else return config_error("unknown mode: " + mode_text);
  if (!get_size(cfg, "max_iters", opts.max_iters, &opts.max_iters, &err))
    return config_error(err);
  if (!get_double(cfg, "grad_tol", opts.grad_tol, &opts.grad_tol, &err)) return config_error(err);
  if (!get_double(cfg, "value_tol", opts.value_tol, &opts.value_tol, &err))
    return config_error(err);
  if (!get_double(cfg, "armijo_c", opts.armijo_c, &opts.armijo_c, &err)) return config_error(err);
  if (!get_double(cfg, "backtrack_ratio", opts.backtrack_ratio, &opts.backtrack_ratio, &err))
    return config_error(err);
  if (!get_double(cfg, "step_safety", opts.step_safety, &opts.step_safety, &err))
    return config_error(err);
  if (cfg.count("sum_constraint")) {
    if (!get_double(cfg, "sum_constraint", 0.0, &opts.sum_constraint, &err))
      return config_error(err);
    opts.has_sum_constraint = 1;
  }

  dsgm_result_t* raw_result = nullptr;
  dsgm_status_t st = dsgm_solve(spec.get(), op.get(), p.data(), p.size(), x0.data(), x0.size(),
                                &opts, &raw_result);
  if (st != DSGM_OK) return api_error("solve", st);
  ResultPtr result(raw_result);

  std::vector<double> x(x0.size());
  st = dsgm_result_x(result.get(), x.data(), x.size());
  if (st != DSGM_OK) return api_error("result", st);
  const std::string out_x = get_string(cfg, "out_x", "x_final.csv");
  if (!write_vector(out_x, x, &err)) return config_error(err);

  const std::string out_trace = get_string(cfg, "out_trace", "trace.csv");
  std::FILE* f = std::fopen(out_trace.c_str(), "w");
  if (!f) return config_error("cannot write " + out_trace);
  std::fprintf(f, "iter,value,gradnorm,alpha,sum_x,min_x\n");
  const std::size_t rows = dsgm_result_trace_size(result.get());
  for (std::size_t i = 0; i < rows; ++i) {
    dsgm_trace_row_t row;
    if (dsgm_result_trace(result.get(), i, &row) != DSGM_OK) break;
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.iter, row.value, row.grad_norm,
                 row.alpha, row.sum_x, row.min_x);
  }
  std::fclose(f);

  const dsgm_stop_t stop = dsgm_result_status(result.get());
  dsgm_trace_row_t last;
  if (rows > 0 && dsgm_result_trace(result.get(), rows - 1, &last) == DSGM_OK)
    std::printf("status %s iters %zu value %.17g gradnorm %.17g\n", stop_name(stop), last.iter,
                last.value, last.grad_norm);
  else
    std::printf("status %s\n", stop_name(stop));
  return stop == DSGM_STOP_DEGENERATE ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  const std::string command = argv[1];
  if ((argc - 2) % 2 != 0) return usage();

  Config cfg;
  std::string err;
  // Config files first, then remaining pairs override in order.
  for (int i = 2; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--config") == 0) {
      if (!load_config_file(argv[i + 1], &cfg, &err)) return config_error(err);
    }
  }
  for (int i = 2; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key.rfind("--", 0) != 0) return usage();
    if (key == "--config") continue;
    cfg[key.substr(2)] = argv[i + 1];
  }

  if (command == "eval") return cmd_eval(cfg);
  if (command == "gradcheck") return cmd_gradcheck(cfg);
  if (command == "synth") return cmd_synth(cfg);
  if (command == "solve") return cmd_solve(cfg);
  return usage();
}
