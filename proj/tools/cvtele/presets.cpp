#include "presets.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cvtele::cli {

namespace {

[[noreturn]] void usage(const std::string& message) { throw CliError(kExitUsage, message); }

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    usage("invalid number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

std::vector<std::string_view> split_params(std::string_view params) {
  std::vector<std::string_view> out;
  if (params.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = params.find(',', start);
    out.push_back(params.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int modes_for(StateRole role) { return role == StateRole::input ? 1 : 2; }

const char* role_name(StateRole role) { return role == StateRole::input ? "input" : "resource"; }

template <class Factory>
StatePtr make(Factory&& factory, const std::string& context) {
  cvt_state* raw = nullptr;
  const cvt_status status = factory(&raw);
  StatePtr owned(raw);
  check(status, context, kExitUsage);
  return owned;
}

StatePtr build_preset(std::string_view name, std::string_view params, StateRole role) {
  const std::vector<std::string_view> args = split_params(params);
  const std::string label(name);
  auto expect_args = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      usage("preset '" + label + "' takes " +
            (lo == hi ? std::to_string(lo) : std::to_string(lo) + " or " + std::to_string(hi)) +
            " parameter(s), got " + std::to_string(args.size()));
    }
  };
  if (name == "vacuum") {
    expect_args(0, 0);
    return make([&](cvt_state** out) { return cvt_state_vacuum(modes_for(role), out); }, "vacuum preset");
  }
  if (name == "coherent") {
    expect_args(1, 2);
    if (role != StateRole::input) usage("preset 'coherent' is single-mode and cannot be a resource");
    std::complex<double> alpha;
    if (args.size() == 1) {
      alpha = parse_complex(args[0]);
    } else {
      alpha = {parse_real(trim(args[0]), "coherent amplitude"),
               parse_real(trim(args[1]), "coherent amplitude")};
    }
    return make([&](cvt_state** out) { return cvt_state_coherent({alpha.real(), alpha.imag()}, out); },
                "coherent preset");
  }
  if (name == "svs") {
    expect_args(1, 1);
    if (role != StateRole::resource) usage("preset 'svs' is two-mode and cannot be an input");
    const double r = parse_real(trim(args[0]), "squeezing r");
    if (r < 0.0) usage("squeezing parameter must satisfy r >= 0, got " + std::string(args[0]));
    return make([&](cvt_state** out) { return cvt_state_two_mode_squeezed_vacuum(r, out); },
                "svs preset");
  }
  if (name == "thermal") {
    expect_args(1, 1);
    const double nbar = parse_real(trim(args[0]), "mean photon number");
    if (nbar < 0.0) usage("mean photon number must satisfy nbar >= 0, got " + std::string(args[0]));
    StatePtr mode = make([&](cvt_state** out) { return cvt_state_thermal(nbar, out); },
                         "thermal preset");
    if (role == StateRole::input) return mode;
    return make([&](cvt_state** out) { return cvt_state_tensor(mode.get(), mode.get(), out); },
                "thermal preset");
  }
  usage("unknown preset '" + label + "' (expected vacuum, coherent, svs or thermal)");
}

StatePtr load_file(const std::string& path, StateRole role) {
  std::ifstream in(path);
  if (!in) usage("cannot read state file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  cvt_state* raw = nullptr;
  const cvt_status status = cvt_state_from_json(buf.str().c_str(), &raw);
  StatePtr owned(raw);
  check(status, "state file '" + path + "'",
        status == CVT_ERR_UNPHYSICAL ? kExitFailure : kExitUsage);
  if (cvt_state_n_modes(owned.get()) != modes_for(role)) {
    usage("state file '" + path + "' has " + std::to_string(cvt_state_n_modes(owned.get())) +
          " mode(s); the " + role_name(role) + " needs " + std::to_string(modes_for(role)));
  }
  return owned;
}

bool is_preset_name(std::string_view name) {
  return name == "vacuum" || name == "coherent" || name == "svs" || name == "thermal";
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) usage("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, "complex number"), 0.0};

  const std::string_view body(s.data(), s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view() : body.substr(0, split);
  std::string_view im = split == std::string_view::npos ? body : body.substr(split);
  double imag = 0.0;
  if (im.empty() || im == "+") {
    imag = 1.0;
  } else if (im == "-") {
    imag = -1.0;
  } else {
    imag = parse_real(im, "complex number");
  }
  return {re.empty() ? 0.0 : parse_real(re, "complex number"), imag};
}

StatePtr load_state(std::string_view text, StateRole role) {
  text = trim(text);
  if (text.empty()) usage(std::string("empty ") + role_name(role) + " specification");
  const std::size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view params =
      colon == std::string_view::npos ? std::string_view() : text.substr(colon + 1);
  const std::string path(text);
  if (is_preset_name(name) && !std::filesystem::exists(path)) {
    return build_preset(name, params, role);
  }
  if (std::filesystem::exists(path)) return load_file(path, role);
  usage("'" + path + "' is neither a preset nor an existing state file");
}

}  // namespace cvtele::cli
