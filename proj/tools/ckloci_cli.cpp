// ckloci: command-line front end.
//
// Exit codes: 0 ok / PASS, 1 INCONCLUSIVE, 2 PrecisionError, 3 usage.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ckloci/analysis.hpp"
#include "ckloci/cache.hpp"
#include "ckloci/loci.hpp"
#include "ckloci/steinberg.hpp"

using namespace ckloci;

namespace {

constexpr int kOk = 0;
constexpr int kInconclusive = 1;
constexpr int kPrecision = 2;
constexpr int kUsage = 3;

struct Globals {
  bool no_cache = false;
  std::string cache_dir;

  ResultCache cache() const {
    return ResultCache(cache_dir.empty() ? ResultCache::default_dir() : std::filesystem::path(cache_dir), !no_cache);
  }
};

PadicNumber parse_for(Prime p, const std::string& text, const char* what) {
  PadicNumber x = PadicNumber::parse(text);
  if (x.prime() != p) throw DomainError(std::string(what) + " is not written in base " + std::to_string(p));
  return x;
}

SteinbergDecomposition cached_decomposition(const ResultCache& cache, unsigned q, Prime p, unsigned bound) {
  const std::string key = "q=" + std::to_string(q) + ",bound=" + (bound ? std::to_string(bound) : "default");
  if (auto hit = cache.get("dcw", p, key)) return decomposition_from_json(*hit);
  SteinbergDecomposition dec = bound ? steinberg_decompose(2, q, bound, p) : default_decomposition(q, p);
  cache.put("dcw", p, key, to_json(dec));
  return dec;
}

PadicNumber a_q2_auto(const ResultCache& cache, Prime p, unsigned q, int N) {
  if (q == 3) return resolve_a_q2(p, q, N);
  return dcw_coefficient(p, N, cached_decomposition(cache, q, p, 0));
}

void print_locus(const CKLocus& locus, bool json) {
  if (json) {
    std::cout << to_json(locus) << "\n";
    return;
  }
  std::cout << render_listing(locus) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refined Chabauty-Kim loci of the thrice-punctured line"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--no-cache", g.no_cache, "Bypass the on-disk cache");
  app.add_option("--cache-dir", g.cache_dir, "Cache directory (default $CKLOCI_CACHE_DIR or ~/.cache/ckloci)");

  // depth2
  auto* d2 = app.add_subcommand("depth2", "Depth 2 locus for S = {2, q}");
  Prime d2_p = 0;
  unsigned d2_q = 3;
  int d2_prec = 10;
  std::string d2_a = "auto";
  bool d2_json = false;
  d2->add_option("--p", d2_p, "Auxiliary prime")->required();
  d2->add_option("--q", d2_q, "Odd prime q")->capture_default_str();
  d2->add_option("--prec", d2_prec, "Precision N")->capture_default_str();
  d2->add_option("--a-q2", d2_a, "'auto' or a p-adic expansion of a_{tau_q tau_2}")->capture_default_str();
  d2->add_flag("--json", d2_json);

  // depth4
  auto* d4 = app.add_subcommand("depth4", "Depth 4 locus for S = {2, 3} (or user coefficients)");
  Prime d4_p = 0;
  unsigned d4_q = 3;
  int d4_prec = 10;
  int d4_max = 40;
  bool d4_json = false;
  std::string d4_zeta3, d4_a, d4_b, d4_c, d4_aq2;
  d4->add_option("--p", d4_p)->required();
  d4->add_option("--q", d4_q)->capture_default_str();
  d4->add_option("--prec", d4_prec)->capture_default_str();
  d4->add_option("--prec-max", d4_max)->capture_default_str();
  d4->add_option("--zeta3", d4_zeta3, "Use the period formulas with this value of zeta(3) (q = 3)");
  d4->add_option("--a", d4_a, "Coefficient of Li4");
  d4->add_option("--b", d4_b, "Coefficient of log Li3");
  d4->add_option("--c", d4_c, "Coefficient of log^3 Li1");
  d4->add_option("--a-q2", d4_aq2, "a_{tau_q tau_2} for user coefficients ('auto' allowed)");
  d4->add_flag("--json", d4_json);

  // verify-kim
  auto* vk = app.add_subcommand("verify-kim", "Check the q = 3 conjecture for a range of p");
  Prime vk_min = 5, vk_max = 100;
  int vk_prec = 12, vk_pmax = 40;
  bool vk_allow = false;
  vk->add_option("--p-min", vk_min)->capture_default_str();
  vk->add_option("--p-max", vk_max)->capture_default_str();
  vk->add_option("--prec", vk_prec)->capture_default_str();
  vk->add_option("--prec-max", vk_pmax)->capture_default_str();
  vk->add_flag("--allow-inconclusive", vk_allow);

  // survey
  auto* sv = app.add_subcommand("survey", "Depth 2 locus sizes over a range of p");
  unsigned sv_q = 3;
  Prime sv_min = 3, sv_max = 31;
  SurveyOptions sv_opts;
  bool sv_csv = false, sv_json = false, sv_plot = false, sv_search = false;
  sv->add_option("--q", sv_q)->capture_default_str();
  sv->add_option("--p-min", sv_min)->capture_default_str();
  sv->add_option("--p-max", sv_max)->capture_default_str();
  sv->add_option("--prec", sv_opts.precision)->capture_default_str();
  sv->add_option("--prec-max", sv_opts.max_precision)->capture_default_str();
  sv->add_option("--threads", sv_opts.threads, "Worker threads (0 = all cores)")->capture_default_str();
  sv->add_flag("--search", sv_search, "Always use the Steinberg search for a_q2");
  auto* fmt_csv = sv->add_flag("--csv", sv_csv);
  auto* fmt_json = sv->add_flag("--json", sv_json)->excludes(fmt_csv);
  sv->add_flag("--plot", sv_plot, "Print 'p size' pairs for a scatter plot")->excludes(fmt_csv)->excludes(fmt_json);

  // dcw
  auto* dc = app.add_subcommand("dcw", "Steinberg decomposition and a_{tau_q tau_2}");
  unsigned dc_q = 0;
  Prime dc_p = 0;
  int dc_prec = 10;
  unsigned dc_bound = 0;
  bool dc_json = false;
  dc->add_option("--q", dc_q)->required();
  dc->add_option("--p", dc_p)->required();
  dc->add_option("--prec", dc_prec)->capture_default_str();
  dc->add_option("--bound", dc_bound, "Support bound (0 = closed form or automatic)")->capture_default_str();
  dc->add_flag("--json", dc_json);

  // locus11
  auto* l11 = app.add_subcommand("locus11", "Roots of unity where Li2 vanishes");
  Prime l11_p = 0;
  int l11_prec = 10, l11_max = 40;
  bool l11_json = false;
  l11->add_option("--p", l11_p)->required();
  l11->add_option("--prec", l11_prec)->capture_default_str();
  l11->add_option("--prec-max", l11_max)->capture_default_str();
  l11->add_flag("--json", l11_json);

  // cache-gc
  auto* gc = app.add_subcommand("cache-gc", "Remove stale cache entries");
  bool gc_all = false;
  gc->add_flag("--all", gc_all, "Remove every entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const ResultCache cache = g.cache();
  if (cache.enabled()) set_g_table_store(make_g_table_store(cache));

  try {
    if (*d2) {
      require_auxiliary(d2_p, d2_q);
      const std::string key = "q=" + std::to_string(d2_q) + ",N=" + std::to_string(d2_prec) + ",a=" + d2_a;
      if (auto hit = cache.get("locus", d2_p, "depth2," + key)) {
        print_locus(locus_from_json(*hit), d2_json);
        return kOk;
      }
      const PadicNumber a = d2_a == "auto" ? a_q2_auto(cache, d2_p, d2_q, d2_prec + 4)
                                           : parse_for(d2_p, d2_a, "--a-q2");
      const CKLocus locus = depth2_locus(d2_p, d2_q, d2_prec, a);
      cache.put("locus", d2_p, "depth2," + key, to_json(locus));
      print_locus(locus, d2_json);
      return kOk;
    }

    if (*d4) {
      require_auxiliary(d4_p, d4_q);
      const bool user = !d4_a.empty() || !d4_b.empty() || !d4_c.empty();
      CKLocus locus;
      if (user) {
        if (d4_a.empty() || d4_b.empty() || d4_c.empty() || d4_aq2.empty()) {
          throw DomainError("user coefficients need --a, --b, --c and --a-q2");
        }
        CoeffSet cs;
        cs.a = parse_for(d4_p, d4_a, "--a");
        cs.b = parse_for(d4_p, d4_b, "--b");
        cs.c = parse_for(d4_p, d4_c, "--c");
        cs.a_q2 = d4_aq2 == "auto" ? a_q2_auto(cache, d4_p, d4_q, d4_prec + 4) : parse_for(d4_p, d4_aq2, "--a-q2");
        cs.provenance = "user-supplied";
        locus = depth4_locus(d4_p, d4_q, d4_prec, cs);
      } else if (d4_q != 3) {
        throw DomainError("depth 4 coefficients are only known for q = 3; pass --a, --b, --c and --a-q2");
      } else if (!d4_zeta3.empty()) {
        const CoeffSet cs = coeffs_from_periods(d4_p, d4_prec + 10, parse_for(d4_p, d4_zeta3, "--zeta3"));
        locus = depth4_locus(d4_p, 3, d4_prec, cs);
      } else {
        const std::string key = "q=3,N=" + std::to_string(d4_prec) + ",max=" + std::to_string(d4_max);
        if (auto hit = cache.get("locus", d4_p, "depth4," + key)) {
          locus = locus_from_json(*hit);
        } else {
          locus = depth4_locus_adaptive(d4_p, PrecisionPolicy(d4_prec, std::max(d4_prec, d4_max)));
          cache.put("locus", d4_p, "depth4," + key, to_json(locus));
        }
      }
      print_locus(locus, d4_json);
      if (!d4_json) {
        for (const auto& pt : locus.points) std::cout << to_string(pt.status) << " ";
        std::cout << "\n";
      }
      const bool open = std::any_of(locus.points.begin(), locus.points.end(),
                                    [](const LocusPoint& x) { return x.status == PointStatus::Unresolved; });
      return open ? kInconclusive : kOk;
    }

    if (*vk) {
      int pass = 0, inconclusive = 0;
      for (Prime p = std::max<Prime>(vk_min, 5); p <= vk_max; ++p) {
        if (!is_prime(p)) continue;
        const KimReport r = verify_kim(p, vk_prec, std::max(vk_prec, vk_pmax));
        std::cout << "p=" << p << " " << r.verdict << " prec=" << r.precision << " depth2=" << r.depth2_size
                  << " depth4=" << r.depth4_size << " locus11=" << r.locus11_size;
        if (!r.escalations.empty()) {
          std::cout << " escalated-from=";
          for (std::size_t i = 0; i < r.escalations.size(); ++i) std::cout << (i ? "," : "") << r.escalations[i];
        }
        if (!r.note.empty()) std::cout << " (" << r.note << ")";
        std::cout << "\n";
        (r.pass ? pass : inconclusive)++;
      }
      std::cout << "summary: " << pass << " PASS, " << inconclusive << " INCONCLUSIVE\n";
      return inconclusive > 0 && !vk_allow ? kInconclusive : kOk;
    }

    if (*sv) {
      sv_opts.source = sv_search ? A2Source::Search : A2Source::Auto;
      const auto rows = survey(sv_q, sv_min, sv_max, sv_opts);
      if (sv_json) {
        std::cout << survey_json(rows) << "\n";
      } else if (sv_plot) {
        for (const auto& r : rows) {
          if (r.error.empty()) std::cout << r.p << " " << r.size << "\n";
        }
      } else if (sv_csv) {
        std::cout << survey_csv(rows);
      } else {
        for (const auto& r : rows) {
          std::cout << "p=" << r.p << " size=" << r.size;
          if (!r.error.empty()) std::cout << " error: " << r.error;
          std::cout << "\n";
        }
      }
      const bool failed = std::any_of(rows.begin(), rows.end(), [](const SurveyRecord& r) { return !r.error.empty(); });
      return failed ? kPrecision : kOk;
    }

    if (*dc) {
      require_auxiliary(dc_p, dc_q);
      const SteinbergDecomposition dec = cached_decomposition(cache, dc_q, dc_p, dc_bound);
      const PadicNumber value = dcw_coefficient(dc_p, dc_prec, dec);
      if (dc_json) {
        std::cout << to_json(dec) << "\n";
      } else {
        for (const auto& t : dec.terms) std::cout << t.c.get_str() << " * [" << t.t.get_str() << "]\n";
      }
      std::cout << value << "\n";
      return kOk;
    }

    if (*l11) {
      const CKLocus locus = locus_11(l11_p, PrecisionPolicy(l11_prec, std::max(l11_prec, l11_max)));
      print_locus(locus, l11_json);
      return kOk;
    }

    if (*gc) {
      std::cout << "removed " << cache.gc(gc_all) << " entries from " << cache.dir().string() << "\n";
      return kOk;
    }
  } catch (const PrecisionError& e) {
    std::cerr << "PrecisionError: " << e.what() << "\n";
    return kPrecision;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InsufficientBound& e) {
    std::cerr << "error: " << e.what() << " (raise --bound)\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
