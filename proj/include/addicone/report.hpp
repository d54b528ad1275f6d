#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "addicone/additivity.hpp"
#include "addicone/decoupling.hpp"
#include "addicone/inequalities.hpp"
#include "addicone/json_io.hpp"

namespace addicone {

inline constexpr const char* kVersion = "1.0.0";

/// Coset representative of v modulo span(eqs) with the fewest nonzero
/// coordinates (ties: fewer negative entries, then lex order). Keeps report
/// rows in the shortest readable form, e.g. "a_BEV >= 0" instead of a longer
/// equivalent combination.
inline RatVec nice_representative(const RatVec& v, const RatMat& eqs) {
  const Rref er = rref(eqs);
  const std::size_t r = er.rank();
  if (r == 0) return primitive(v);
  const std::size_t d = v.size();

  std::vector<std::size_t> comb(r);
  for (std::size_t i = 0; i < r; ++i) comb[i] = i;
  RatVec best = primitive(reduce_mod(v, er));
  auto score = [](const RatVec& x) {
    int support = 0, negs = 0;
    for (const auto& c : x) {
      if (!c.is_zero()) ++support;
      if (c.sign() < 0) ++negs;
    }
    return std::pair<int, int>(support, negs);
  };
  auto better = [&](const RatVec& a, const RatVec& b) {
    const auto sa = score(a), sb = score(b);
    if (sa != sb) return sa < sb;
    return lex_less(a, b);
  };

  while (true) {
    // Solve for the unique coset element vanishing on the chosen coordinates,
    // when the equality rows restricted there are invertible.
    RatMat sys;  // rows: eqs columns at comb; rhs: v at comb
    for (std::size_t i = 0; i < r; ++i) {
      RatVec row;
      for (const auto& e : er.rows) row.push_back(e[comb[i]]);
      row.push_back(v[comb[i]]);
      sys.push_back(std::move(row));
    }
    const Rref sr = rref(sys);
    bool solvable = sr.rank() == r;
    for (const auto& pc : sr.pivot_cols)
      if (pc == r) solvable = false;  // pivot in the rhs column: inconsistent
    if (solvable) {
      RatVec mu(r, Rational(0));
      for (std::size_t i = 0; i < sr.rows.size(); ++i) mu[sr.pivot_cols[i]] = sr.rows[i][r];
      RatVec cand = v;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t c = 0; c < d; ++c) cand[c] -= mu[i] * er.rows[i][c];
      if (!is_zero_vec(cand)) {
        cand = primitive(cand);
        if (better(cand, best)) best = cand;
      }
    }
    // next combination
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (comb[k] + (r - k) < d) {
        ++comb[k];
        for (std::size_t j = k + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
        break;
      }
      if (k == 0) return best;
    }
    if (r == 0) break;
  }
  return best;
}

namespace detail {

inline std::string coeff_row_string(const RatVec& v, const std::vector<std::string>& coords,
                                    const char* relation) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    const std::string mag = abs(v[i]) == Rational(1) ? "" : abs(v[i]).str() + " ";
    if (out.empty())
      out += (v[i].sign() < 0 ? "-" : "") + mag + coords[i];
    else
      out += (v[i].sign() < 0 ? " - " : " + ") + mag + coords[i];
  }
  if (out.empty()) out = "0";
  return out + " " + relation + " 0";
}

/// Tries to render a functional as a single (conditional) mutual information
/// or conditional entropy; falls back to the plain H-sum.
inline std::string compact_render(const LinearEntropyFunctional& f) {
  const SystemContext& ctx = f.ctx();
  std::vector<std::pair<Mask, Rational>> terms;
  for (Mask m = 1; m <= ctx.full_mask(); ++m)
    if (!f.coeff(m).is_zero()) terms.emplace_back(m, f.coeff(m));

  auto all_unit = [&] {
    for (const auto& [m, c] : terms)
      if (!(abs(c) == Rational(1))) return false;
    return true;
  };

  if (terms.empty()) return "0";
  if (all_unit()) {
    for (int sgn : {+1, -1}) {
      std::vector<Mask> plus, minus;
      for (const auto& [m, c] : terms)
        (c.sign() == sgn ? plus : minus).push_back(m);
      // I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C); C may be empty.
      if (plus.size() == 2 && (minus.size() == 2 || minus.size() == 1)) {
        const Mask x = plus[0], y = plus[1];
        const Mask join = x | y, meet = x & y;
        const bool match = minus.size() == 2
                               ? ((minus[0] == join && minus[1] == meet) ||
                                  (minus[1] == join && minus[0] == meet))
                               : (minus[0] == join && meet == 0u);
        if (match && (x & ~meet) && (y & ~meet)) {
          std::string s = "I(" + ctx.label(x & ~meet) + ";" + ctx.label(y & ~meet);
          if (meet) s += "|" + ctx.label(meet);
          s += ")";
          return (sgn < 0 ? "-" : "") + s;
        }
      }
      // H(S|T) = H(ST) - H(T)
      if (plus.size() == 1 && minus.size() == 1) {
        const Mask st = plus[0], t = minus[0];
        if ((t & ~st) == 0 && (st & ~t)) {
          std::string s = "H(" + ctx.label(st & ~t) + "|" + ctx.label(t) + ")";
          return (sgn < 0 ? "-" : "") + s;
        }
      }
      if (plus.size() == 1 && minus.empty())
        return std::string(sgn < 0 ? "-" : "") + "H(" + ctx.label(plus[0]) + ")";
    }
  }
  return f.render_plain();
}

inline std::string side_label(int label, const char* one, const char* two) {
  std::string out;
  if (label & 1) out += one;
  if (label & 2) out += two;
  return out.empty() ? "-" : out;
}

inline json certificate_to_json(const Certificate& cert, const std::vector<InequalityInstance>& gens) {
  json j;
  j["member"] = cert.member;
  if (cert.member) {
    json muls = json::array();
    for (std::size_t i = 0; i < cert.multipliers.size(); ++i) {
      if (cert.multipliers[i].is_zero()) continue;
      muls.push_back({{"index", i},
                      {"name", gens[i].name},
                      {"family", family_name(gens[i].family)},
                      {"coeff", cert.multipliers[i].str()}});
    }
    j["multipliers"] = std::move(muls);
  } else {
    j["separator"] = ratvec_to_json(cert.separator);
  }
  return j;
}

}  // namespace detail

struct Report {
  std::string name;
  json data;
  std::string markdown;
  std::string csv;
  bool certified = true;  // false when any ray certification failed
};

inline json block_cone_to_json(const BlockCone& b) {
  const std::vector<InequalityInstance> gens = quantum_basic_set(channel_pair_context(b.code.n_aux()));
  json j;
  if (b.code.n_aux() == 1)
    j["class"] = {b.code.slots[0].first, b.code.slots[0].second};
  else
    j["class"] = json::array();
  j["coords"] = b.hrep.coords;
  j["equalities"] = json::array();
  for (const auto& e : b.hrep.eqs) j["equalities"].push_back(ratvec_to_json(e));
  j["facets"] = json::array();
  for (const auto& f : b.hrep.ineqs) {
    json row;
    row["vector"] = ratvec_to_json(f);
    row["formula"] = detail::coeff_row_string(nice_representative(f, b.hrep.eqs), b.hrep.coords, ">=");
    j["facets"].push_back(std::move(row));
  }
  j["rays"] = json::array();
  for (const auto& r : b.rays) {
    json row;
    row["vector"] = ratvec_to_json(r.vector);
    row["formula"] = r.formula;
    row["certificate"] = detail::certificate_to_json(r.certificate, gens);
    j["rays"].push_back(std::move(row));
  }
  j["lineality"] = json::array();
  for (const auto& l : b.lineality) {
    json row;
    row["vector"] = ratvec_to_json(l.vector);
    row["formula"] = l.formula;
    row["certificate"] = detail::certificate_to_json(l.certificate, gens);
    row["certificate_reverse"] = detail::certificate_to_json(l.certificate_reverse, gens);
    j["lineality"].push_back(std::move(row));
  }
  j["witnesses"] = json::array();
  for (const auto& w : b.witnesses) {
    json row;
    row["name"] = w.spec.name;
    row["form"] = ratvec_to_json(w.form);
    row["tight_on"] = w.tight_facets;
    j["witnesses"].push_back(std::move(row));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Report builders

inline Report report_zero_var() {
  const BlockCone& b = detail::cached_block_cone(DecouplingCode{});
  Report rep;
  rep.name = "zero-var";
  rep.certified = b.certified;
  rep.data = block_cone_to_json(b);

  std::ostringstream md;
  md << "# Variable-free additivity cone\n\n";
  md << "Inequalities:\n\n";
  for (const auto& f : b.hrep.ineqs)
    md << "- " << detail::coeff_row_string(f, b.hrep.coords, ">=") << "\n";
  md << "\nExtreme rays:\n\n";
  for (const auto& r : b.rays) md << "- " << r.formula << "\n";
  rep.markdown = md.str();

  std::ostringstream csv;
  csv << "kind,vector,formula\n";
  for (const auto& f : b.hrep.ineqs) {
    csv << "facet,\"";
    for (std::size_t i = 0; i < f.size(); ++i) csv << (i ? " " : "") << f[i].str();
    csv << "\",\"" << detail::coeff_row_string(f, b.hrep.coords, ">=") << "\"\n";
  }
  for (const auto& r : b.rays) {
    csv << "ray,\"";
    for (std::size_t i = 0; i < r.vector.size(); ++i) csv << (i ? " " : "") << r.vector[i].str();
    csv << "\",\"" << r.formula << "\"\n";
  }
  rep.csv = csv.str();
  return rep;
}

namespace detail {

inline std::string ray_summary(const BlockCone& b) {
  std::string out;
  for (const auto& r : b.rays) {
    if (!out.empty()) out += ", ";
    out += r.formula;
  }
  for (const auto& l : b.lineality) {
    if (!out.empty()) out += ", ";
    out += l.formula;
  }
  return out;
}

inline std::string cone_summary(const BlockCone& b) {
  std::string out;
  for (const auto& f : b.hrep.ineqs) {
    if (!out.empty()) out += ", ";
    out += coeff_row_string(nice_representative(f, b.hrep.eqs), b.hrep.coords, ">=");
  }
  for (const auto& e : b.hrep.eqs) {
    RatVec nice = nice_representative(e, {});
    // Skip the boundedness row itself; it holds for every block.
    bool all_one = nice.size() == 4;
    for (const auto& c : nice)
      if (!(c == Rational(1))) all_one = false;
    if (all_one) continue;
    if (!out.empty()) out += ", ";
    out += coeff_row_string(nice, b.hrep.coords, "=");
  }
  return out;
}

}  // namespace detail

/// Case labels for the one-slot classes in published order; the two classes
/// absorbed by duality are marked with the case they fold into.
inline std::vector<std::pair<DecouplingCode, std::string>> one_var_case_table() {
  return {
      {one_var_code(3, 3), "1"}, {one_var_code(3, 1), "2"},        {one_var_code(3, 0), "3"},
      {one_var_code(1, 1), "4"}, {one_var_code(1, 2), "5"},        {one_var_code(1, 0), "2 (dual)"},
      {one_var_code(0, 0), "1 (dual)"},
  };
}

inline Report report_one_var(const std::vector<DecouplingCode>& classes) {
  Report rep;
  rep.name = "one-var";
  rep.data = json::array();

  const auto case_table = one_var_case_table();
  auto case_of = [&](const DecouplingCode& c) -> std::string {
    for (const auto& [code, label] : case_table)
      if (code == c) return label;
    return "?";
  };
  const auto codes = enumerate_standard(1);
  const auto all_classes = reduce_by_symmetry(codes, {SymmetryMap::BESwap});

  std::ostringstream md;
  md << "# One-variable additivity cones\n\n";
  md << "| case | (a,b) | M1 | M2 | equivalents | additive cone | extreme rays |\n";
  md << "|------|-------|----|----|-------------|---------------|--------------|\n";

  std::ostringstream csv;
  csv << "class_a,class_b,kind,vector,formula\n";

  for (const auto& code : classes) {
    const BlockCone& b = detail::cached_block_cone(code);
    if (!b.certified) rep.certified = false;
    json jc = block_cone_to_json(b);
    jc["case"] = case_of(code);
    for (const auto& cls : all_classes)
      if (cls.representative == code) {
        json eq = json::array();
        for (const auto& e : cls.equivalents) eq.push_back({e.slots[0].first, e.slots[0].second});
        jc["equivalents"] = std::move(eq);
      }
    rep.data.push_back(std::move(jc));

    const int a = code.slots[0].first, bb = code.slots[0].second;
    std::string equiv;
    for (const auto& cls : all_classes)
      if (cls.representative == code)
        for (const auto& e : cls.equivalents) {
          if (!equiv.empty()) equiv += ", ";
          equiv += "(" + std::to_string(e.slots[0].first) + "," + std::to_string(e.slots[0].second) + ")";
        }
    if (equiv.empty()) equiv = "-";
    md << "| " << case_of(code) << " | (" << a << "," << bb << ") | "
       << detail::side_label(a, "B1", "E1") << " | " << detail::side_label(bb, "B2", "E2") << " | "
       << equiv << " | " << detail::cone_summary(b) << " | " << detail::ray_summary(b) << " |\n";

    auto emit_csv = [&](const char* kind, const RatVec& v, const std::string& formula) {
      csv << a << "," << bb << "," << kind << ",\"";
      for (std::size_t i = 0; i < v.size(); ++i) csv << (i ? " " : "") << v[i].str();
      csv << "\",\"" << formula << "\"\n";
    };
    for (const auto& f : b.hrep.ineqs)
      emit_csv("facet", f, detail::coeff_row_string(nice_representative(f, b.hrep.eqs), b.hrep.coords, ">="));
    for (const auto& e : b.hrep.eqs)
      emit_csv("equality", e, detail::coeff_row_string(e, b.hrep.coords, "="));
    for (const auto& r : b.rays) emit_csv("ray", r.vector, r.formula);
    for (const auto& l : b.lineality) emit_csv("lineality", l.vector, l.formula);
  }
  rep.markdown = md.str();
  rep.csv = csv.str();
  return rep;
}

inline Report report_one_var_all() {
  std::vector<DecouplingCode> classes;
  for (const auto& [code, label] : one_var_case_table()) classes.push_back(code);
  return report_one_var(classes);
}

inline Report report_multi_var(const DecouplingCode& code) {
  const AdditivityCone cone = multi_var_cone(code);
  Report rep;
  rep.name = "multi-var";
  rep.certified = cone.certified;

  json j;
  j["aux"] = code.n_aux();
  j["code"] = code_to_json(code);
  j["coords"] = cone.space.coord_names();
  j["full"] = cone_to_json(cone.hrep, cone.vrep);
  j["blocks"] = json::array();
  for (const auto& [t, b] : cone.blocks) {
    json jb = block_cone_to_json(b);
    jb["subset"] = t == 0 ? std::string("-") : cone.space.aux_label(t);
    j["blocks"].push_back(std::move(jb));
  }
  rep.data = std::move(j);

  std::ostringstream md;
  md << "# Additivity cone for code " << code.str() << "\n\n";
  md << "| block | class | additive cone | extreme rays |\n";
  md << "|-------|-------|---------------|--------------|\n";
  for (const auto& [t, b] : cone.blocks) {
    md << "| " << (t == 0 ? std::string("-") : cone.space.aux_label(t)) << " | ";
    if (b.code.n_aux() == 1)
      md << "(" << b.code.slots[0].first << "," << b.code.slots[0].second << ")";
    else
      md << "-";
    md << " | " << detail::cone_summary(b) << " | " << detail::ray_summary(b) << " |\n";
  }
  rep.markdown = md.str();

  std::ostringstream csv;
  csv << "block,kind,vector\n";
  for (const auto& [t, b] : cone.blocks) {
    const std::string label = t == 0 ? std::string("-") : cone.space.aux_label(t);
    for (const auto& f : b.hrep.ineqs) {
      csv << label << ",facet,\"";
      for (std::size_t i = 0; i < f.size(); ++i) csv << (i ? " " : "") << f[i].str();
      csv << "\"\n";
    }
    for (const auto& r : b.rays) {
      csv << label << ",ray,\"";
      for (std::size_t i = 0; i < r.vector.size(); ++i) csv << (i ? " " : "") << r.vector[i].str();
      csv << "\"\n";
    }
  }
  rep.csv = csv.str();
  return rep;
}

inline Report report_decouplings(int n_aux) {
  Report rep;
  rep.name = "decouplings";
  const auto codes = enumerate_standard(n_aux);
  json j;
  j["aux"] = n_aux;
  j["count"] = codes.size();
  j["codes"] = json::array();
  for (const auto& c : codes) j["codes"].push_back(code_to_json(c));

  std::ostringstream md;
  std::ostringstream csv;
  if (n_aux == 1) {
    const auto classes = reduce_by_symmetry(codes, {SymmetryMap::BESwap});
    j["classes"] = json::array();
    for (const auto& cls : classes) j["classes"].push_back(class_to_json(cls));
    const auto merged = reduce_by_symmetry(codes, {SymmetryMap::BESwap, SymmetryMap::PurificationDual});
    j["cases"] = json::array();
    for (const auto& cls : merged) {
      json jc = class_to_json(cls);
      // Cross-reference: which BESwap classes fold into this case.
      json absorbed = json::array();
      for (const auto& bcls : classes)
        for (const auto& m : cls.equivalents)
          if (bcls.representative == m)
            absorbed.push_back({bcls.representative.slots[0].first, bcls.representative.slots[0].second});
      jc["absorbs"] = std::move(absorbed);
      j["cases"].push_back(std::move(jc));
    }

    md << "# Standard decouplings, one auxiliary variable\n\n";
    md << "16 consistent codes reduce to " << classes.size() << " classes; purification duality merges them into "
       << merged.size() << " cases.\n\n";
    md << "| (a,b) | M1 | M2 | equivalents |\n|-------|----|----|-------------|\n";
    csv << "rep_a,rep_b,equivalents\n";
    for (const auto& cls : classes) {
      const int a = cls.representative.slots[0].first, b = cls.representative.slots[0].second;
      std::string equiv;
      for (const auto& e : cls.equivalents) {
        if (!equiv.empty()) equiv += ", ";
        equiv += "(" + std::to_string(e.slots[0].first) + "," + std::to_string(e.slots[0].second) + ")";
      }
      if (equiv.empty()) equiv = "-";
      md << "| (" << a << "," << b << ") | " << detail::side_label(a, "B1", "E1") << " | "
         << detail::side_label(b, "B2", "E2") << " | " << equiv << " |\n";
      csv << a << "," << b << ",\"" << equiv << "\"\n";
    }
  } else {
    md << "# Standard decouplings, " << n_aux << " auxiliary variables\n\n";
    md << codes.size() << " consistent codes.\n";
    csv << "code\n";
    for (const auto& c : codes) csv << "\"" << c.str() << "\"\n";
  }
  rep.data = std::move(j);
  rep.markdown = md.str();
  rep.csv = csv.str();
  return rep;
}

inline Report report_esv_tables() {
  Report rep;
  rep.name = "esv-tables";
  json j;
  std::ostringstream md;
  std::ostringstream csv;
  csv << "s,a,b,expression\n";
  for (const Mask s : {Mask{1}, Mask{2}}) {
    const std::string sname = s == 1 ? "B" : "E";
    json tab;
    tab["s"] = sname;
    tab["entries"] = json::array();
    md << "# E_" << sname << "V\n\n| a\\b | 0 | 1 | 2 | 3 |\n|-----|---|---|---|---|\n";
    for (int a = 0; a < 4; ++a) {
      md << "| " << a << " |";
      for (int b = 0; b < 4; ++b) {
        const LinearEntropyFunctional e = esv_term(s, a, b);
        const std::string txt = detail::compact_render(e);
        tab["entries"].push_back({{"a", a}, {"b", b}, {"expression", txt}});
        md << " " << txt << " |";
        csv << sname << "," << a << "," << b << ",\"" << txt << "\"\n";
      }
      md << "\n";
    }
    md << "\n";
    j[sname] = std::move(tab);
  }
  rep.data = std::move(j);
  rep.markdown = md.str();
  rep.csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Manifest + atomic output

struct RunManifest {
  std::string command;
  std::string target;
  std::string format;
  std::string out_dir;
  int samples = 0;
  std::uint64_t seed = 0;
  int aux = 1;
  std::string class_arg;
  std::string channel_file;
  std::string alpha_file;
  std::vector<std::pair<std::string, std::string>> input_hashes;

  json to_json() const {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    if (!target.empty()) j["target"] = target;
    if (!format.empty()) j["format"] = format;
    j["out"] = out_dir;
    if (samples) j["samples"] = samples;
    j["seed"] = seed;
    j["aux"] = aux;
    if (!class_arg.empty()) j["class"] = class_arg;
    if (!channel_file.empty()) j["channel"] = channel_file;
    if (!alpha_file.empty()) j["alpha"] = alpha_file;
    json hashes = json::object();
    for (const auto& [file, digest] : input_hashes) hashes[file] = digest;
    j["inputs"] = std::move(hashes);
    return j;
  }
};

/// FNV-1a 64-bit digest, hex-encoded; used for manifest input hashes.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string hash_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("hash_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return fnv1a_hex(ss.str());
}

/// Writes content to path via a temporary file + rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::string> write_report(const Report& rep, const RunManifest& manifest,
                                             const std::string& format) {
  const std::filesystem::path dir = manifest.out_dir.empty() ? "." : manifest.out_dir;
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  std::filesystem::path main_path;
  std::string content;
  if (format == "json") {
    main_path = dir / (rep.name + ".json");
    content = rep.data.dump(2) + "\n";
  } else if (format == "markdown") {
    main_path = dir / (rep.name + ".md");
    content = rep.markdown;
  } else if (format == "csv") {
    main_path = dir / (rep.name + ".csv");
    content = rep.csv;
  } else {
    throw std::invalid_argument("write_report: unknown format " + format);
  }
  write_atomic(main_path, content);
  written.push_back(main_path.string());

  json mj = manifest.to_json();
  mj["outputs"] = written;
  const std::filesystem::path mpath = dir / (rep.name + ".manifest.json");
  write_atomic(mpath, mj.dump(2) + "\n");
  written.push_back(mpath.string());
  return written;
}

}  // namespace addicone
