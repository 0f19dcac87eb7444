#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "soficlab/cli.hpp"
#include "soficlab/error.hpp"

namespace soficlab::cli {

namespace {

std::string cell(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : ""; }

std::string ratio(const std::optional<std::size_t>& v, std::size_t n) {
  return v ? fmt::format("{:.12f}", static_cast<double>(*v) / static_cast<double>(n)) : "";
}

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string_view series_label(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::betti: return "dim H / N";
    case ExperimentKind::defect: return "defect / (N log p)";
    case ExperimentKind::luck: return "dim_Q H / N";
    default: return "dim ker / N";
  }
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const Report& r) {
  if (r.kind == ExperimentKind::chain_info) {
    os << "# soficlab-chain-info v1\n";
    os << "level,N,orbits,homomorphism,word,fixed_fraction\n";
    for (const auto& row : r.chain_rows)
      for (const auto& w : row.words)
        os << row.level << ',' << row.size << ',' << row.orbits << ',' << (row.homomorphism ? 1 : 0) << ',' << w.word
           << ',' << fmt::format("{:.12f}", w.fixed_fraction) << '\n';
    return;
  }
  const double logp = std::log(static_cast<double>(r.prime));
  os << kCsvSchema << " kind=" << to_string(r.kind) << " p=" << r.prime << " dim=" << r.dim << '\n';
  os << "level,N,dim_ker,rank,dimH_ffp,dimH_q,normalized_ker,normalized_dimH_ffp,normalized_dimH_q,defect,sofic_betti\n";
  for (const auto& row : r.rows) {
    os << row.level << ',' << row.size << ',' << cell(row.dim_ker) << ',' << cell(row.rank) << ','
       << cell(row.dim_h_ffp) << ',' << cell(row.dim_h_q) << ',' << ratio(row.dim_ker, row.size) << ','
       << ratio(row.dim_h_ffp, row.size) << ',' << ratio(row.dim_h_q, row.size) << ',';
    if (row.defect) {
      const double n = static_cast<double>(row.size);
      os << fmt::format("{:.12f}", static_cast<double>(*row.defect) * logp / n) << ','
         << fmt::format("{:.12f}", static_cast<double>(*row.defect) / n);
    } else {
      os << ',';
    }
    os << '\n';
  }
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["schema"] = "soficlab-report/1";
  j["name"] = r.name;
  j["kind"] = std::string(to_string(r.kind));
  j["prime"] = r.prime;
  j["dim"] = r.dim;
  j["subject"] = r.subject;
  if (r.kind == ExperimentKind::chain_info) {
    j["levels"] = nlohmann::json::array();
    for (const auto& row : r.chain_rows) {
      nlohmann::ordered_json x;
      x["level"] = row.level;
      x["N"] = row.size;
      x["orbits"] = row.orbits;
      x["homomorphism"] = row.homomorphism;
      nlohmann::ordered_json words = nlohmann::ordered_json::object();
      for (const auto& w : row.words) words[w.word] = w.fixed_fraction;
      x["fixed_fraction"] = std::move(words);
      j["levels"].push_back(std::move(x));
    }
    return j.dump(2) + "\n";
  }
  j["levels"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json x;
    x["level"] = row.level;
    x["N"] = row.size;
    x["provenance"] = row.provenance;
    x["homomorphism"] = row.homomorphism;
    x["dim_ker"] = opt(row.dim_ker);
    x["rank"] = opt(row.rank);
    x["dimH_ffp"] = opt(row.dim_h_ffp);
    x["dimH_q"] = opt(row.dim_h_q);
    x["dimH_q_certain"] = opt(row.q_certain);
    x["defect_dim"] = opt(row.defect);
    x["linear_count"] = opt(row.linear_count);
    x["brute_count"] = opt(row.brute_count);
    j["levels"].push_back(std::move(x));
  }
  j["tail"] = {{"window", r.tail.window}, {"limsup", r.tail.limsup}, {"liminf", r.tail.liminf}};
  j["references"] = nlohmann::json::array();
  for (const auto& ref : r.references) j["references"].push_back({{"label", ref.label}, {"value", ref.value}});
  return j.dump(2) + "\n";
}

void write_svg(std::ostream& os, const Report& r) {
  constexpr double W = 720, H = 440, left = 70, right = 30, top = 40, bottom = 60;
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : r.rows) {
    double y = 0;
    const double n = static_cast<double>(row.size);
    switch (r.kind) {
      case ExperimentKind::betti: y = static_cast<double>(row.dim_h_ffp.value_or(0)) / n; break;
      case ExperimentKind::defect: y = static_cast<double>(row.defect.value_or(0)) / n; break;
      case ExperimentKind::luck: y = static_cast<double>(row.dim_h_q.value_or(0)) / n; break;
      default: y = static_cast<double>(row.dim_ker.value_or(0)) / n;
    }
    pts.emplace_back(std::log(std::max(n, 1.0)), y);
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts.front().first;
    y0 = y1 = pts.front().second;
  }
  for (const auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  for (const auto& ref : r.references) {
    y0 = std::min(y0, ref.value);
    y1 = std::max(y1, ref.value);
  }
  if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.08 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto sy = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  fmt::print(os, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", W, H,
             W, H);
  fmt::print(os, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(os, "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">{} ({}, p = {})</text>\n", left,
             escape_xml(r.name), to_string(r.kind), r.prime);
  fmt::print(os, "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" "
             "y2=\"{1:.2f}\"/><line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{3:.2f}\"/></g>\n",
             left, H - bottom, W - right, top);
  fmt::print(os, "<g font-family=\"sans-serif\" font-size=\"11\">\n");
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
    fmt::print(os, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.2f}</text>\n", sx(xv), H - bottom + 16,
               xv);
    fmt::print(os, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3f}</text>\n", left - 6, sy(yv) + 4, yv);
  }
  fmt::print(os, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">log N</text>\n", (left + W - right) / 2,
             H - 18);
  fmt::print(os, "<text x=\"16\" y=\"{:.2f}\" transform=\"rotate(-90 16 {:.2f})\" text-anchor=\"middle\">{}</text>\n",
             (top + H - bottom) / 2, (top + H - bottom) / 2, escape_xml(series_label(r.kind)));
  fmt::print(os, "</g>\n");
  for (const auto& ref : r.references) {
    fmt::print(os, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#c03030\" stroke-dasharray=\"6 4\"/>\n",
               left, sy(ref.value), W - right, sy(ref.value));
    fmt::print(os, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#c03030\" "
               "text-anchor=\"end\">{}</text>\n", W - right - 4, sy(ref.value) - 5, escape_xml(ref.label));
  }
  if (!pts.empty()) {
    std::string path;
    for (const auto& [x, y] : pts) path += fmt::format("{}{:.2f},{:.2f}", path.empty() ? "" : " ", sx(x), sy(y));
    fmt::print(os, "<polyline fill=\"none\" stroke=\"#2050b0\" stroke-width=\"2\" points=\"{}\"/>\n", path);
    for (const auto& [x, y] : pts)
      fmt::print(os, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#2050b0\"/>\n", sx(x), sy(y));
  }
  os << "</svg>\n";
}

int run(const Options& options, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig config = load_config(options.config);
    const Report report = run_experiment(config, options.kind, options.jobs);
    std::filesystem::create_directories(options.out);
    const std::string stem = config.name + "." + std::string(to_string(options.kind));
    const auto csv_path = options.out / (stem + ".csv");
    const auto json_path = options.out / (stem + ".json");
    {
      std::ofstream csv(csv_path);
      write_csv(csv, report);
      std::ofstream json(json_path);
      json << to_json(report);
      if (!csv || !json) throw InvalidInput("cannot write reports under " + options.out.string());
    }
    if (options.plot && options.kind != ExperimentKind::chain_info) {
      std::ofstream svg(options.out / (stem + ".svg"));
      write_svg(svg, report);
    }

    if (options.kind == ExperimentKind::chain_info) {
      out << fmt::format("{:>5} {:>8} {:>6} {:>4} {:>22} {:>14}\n", "level", "N", "orbits", "hom", "max fixed fraction",
                         "trivial words");
      for (const auto& row : report.chain_rows) {
        double worst = 0;
        std::size_t trivial = 0;
        for (const auto& w : row.words) {
          if (w.fixed_fraction == 1.0) ++trivial;
          else worst = std::max(worst, w.fixed_fraction);
        }
        out << fmt::format("{:>5} {:>8} {:>6} {:>4} {:>22.6f} {:>14}\n", row.level, row.size, row.orbits,
                           row.homomorphism ? "yes" : "no", worst, trivial);
      }
    } else {
      out << report.subject << ", p = " << report.prime << "\n";
      for (const auto& row : report.rows) {
        out << fmt::format("level {:>3}  N = {:>6}", row.level, row.size);
        if (row.dim_ker) out << fmt::format("  dim ker = {}", *row.dim_ker);
        if (row.dim_h_ffp) out << fmt::format("  dim H(GF(p)) = {}", *row.dim_h_ffp);
        if (row.dim_h_q) out << fmt::format("  dim H(Q) = {}{}", *row.dim_h_q, row.q_certain.value_or(true) ? "" : "?");
        if (row.defect) out << fmt::format("  defect = {}", *row.defect);
        if (row.linear_count) out << fmt::format("  p^dim ker = {}  brute force = {}", *row.linear_count, *row.brute_count);
        out << '\n';
      }
      out << fmt::format("tail (last {}): limsup {:.6f}, liminf {:.6f}\n", report.tail.window, report.tail.limsup,
                         report.tail.liminf);
    }
    out << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
    return kOk;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const DimensionCap& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace soficlab::cli
