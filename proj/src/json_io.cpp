#include "ctd/json_io.hpp"

#include <sstream>

#include "ctd/errors.hpp"

namespace ctd::io {

namespace {

std::string kindName(GenKind k) {
  return k == GenKind::Theta ? "theta" : "thetaTilde";
}

GenKind kindFromName(const std::string& s) {
  if (s == "theta") return GenKind::Theta;
  if (s == "thetaTilde") return GenKind::ThetaTilde;
  throw ParseError("unknown generator kind '" + s + "'");
}

std::vector<std::string> maskToNames(const SigPtr& sig, uint32_t mask) {
  std::vector<std::string> out;
  for (int g = 0; g < sig->totalGens(); ++g)
    if (mask & (1u << g)) out.push_back(sig->genName(g));
  return out;
}

uint32_t namesToMask(const SigPtr& sig, const Json& names) {
  uint32_t mask = 0;
  int last = -1;
  for (const auto& n : names) {
    int g = sig->genIndexByName(n.get<std::string>());
    if (g < 0) throw ParseError("unknown generator '" + n.get<std::string>() + "'");
    if (g <= last) throw ParseError("generators out of canonical order");
    last = g;
    mask |= 1u << g;
  }
  return mask;
}

Json rmatToJson(const RMat& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(formatRational(x));
    out.push_back(std::move(r));
  }
  return out;
}

RMat rmatFromJson(const Json& j) {
  RMat out;
  for (const auto& row : j) {
    RVec r;
    for (const auto& x : row) r.push_back(parseRational(x.get<std::string>()));
    out.push_back(std::move(r));
  }
  return out;
}

Json tmatToJson(const TMat& m, bool withFloat) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(toJson(x, withFloat));
    out.push_back(std::move(r));
  }
  return out;
}

TMat tmatFromJson(const Json& j, int baseDim) {
  TMat out;
  for (const auto& row : j) {
    TVec r;
    for (const auto& x : row) r.push_back(trigFromJson(x, baseDim));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Json toJson(const TauPoly& p) { return p.toString(); }

Json toJson(const TrigScalar& f, bool withFloat) {
  Json out;
  out["dim"] = f.baseDim();
  Json modes = Json::array();
  for (const auto& [k, mode] : f.modes()) {
    Json m;
    m["k"] = k;
    m["cos"] = mode.cos.toString();
    m["sin"] = mode.sin.toString();
    modes.push_back(std::move(m));
  }
  out["modes"] = std::move(modes);
  if (withFloat)
    out["approxAtOrigin"] =
        f.evalDouble(std::vector<double>(static_cast<size_t>(f.baseDim()), 0.0));
  return out;
}

TrigScalar trigFromJson(const Json& j, int baseDim) {
  int dim = j.contains("dim") ? j.at("dim").get<int>() : baseDim;
  TrigScalar f(dim);
  for (const auto& m : j.at("modes")) {
    TrigScalar::Freq k = m.at("k").get<std::vector<int>>();
    f.addMode(k, TauPoly::parse(m.at("cos").get<std::string>()),
              TauPoly::parse(m.at("sin").get<std::string>()));
  }
  return f;
}

Json termsToJson(const InvariantForm& f, bool withFloat) {
  Json out;
  Json terms = Json::array();
  for (const auto& [mask, c] : f.terms()) {
    Json t;
    t["gens"] = maskToNames(f.signature(), mask);
    t["coeff"] = toJson(c, withFloat);
    terms.push_back(std::move(t));
  }
  out["terms"] = std::move(terms);
  return out;
}

InvariantForm termsFromJson(const Json& j, const SigPtr& sig) {
  InvariantForm f(sig);
  for (const auto& t : j.at("terms"))
    f.addTerm(namesToMask(sig, t.at("gens")),
              trigFromJson(t.at("coeff"), sig->baseDim()));
  return f;
}

Json toJson(const SigPtr& sig) {
  Json out;
  out["baseDim"] = sig->baseDim();
  Json gens = Json::array();
  for (int i = 0; i < sig->fiberCount(); ++i) {
    const auto& g = sig->fiberGen(i);
    Json e;
    e["name"] = g.name;
    e["kind"] = kindName(g.kind);
    e["curvature"] = termsToJson(*g.curvature);
    gens.push_back(std::move(e));
  }
  out["generators"] = std::move(gens);
  return out;
}

SigPtr sigFromJson(const Json& j) {
  int m = j.at("baseDim").get<int>();
  auto base = ComplexSignature::base(m);
  std::vector<std::string> names;
  std::vector<GenKind> kinds;
  std::vector<InvariantForm> curvatures;
  for (const auto& g : j.at("generators")) {
    names.push_back(g.at("name").get<std::string>());
    kinds.push_back(kindFromName(g.at("kind").get<std::string>()));
    curvatures.push_back(termsFromJson(g.at("curvature"), base));
  }
  return ComplexSignature::make(m, names, kinds, curvatures);
}

Json toJson(const QuadraticLieAlgebra& g) {
  Json out;
  out["dim"] = g.dim();
  Json c = Json::array();
  for (int i = 0; i < g.dim(); ++i) {
    Json row = Json::array();
    for (int j2 = 0; j2 < g.dim(); ++j2) {
      RVec ei(static_cast<size_t>(g.dim()), Rational(0));
      RVec ej(static_cast<size_t>(g.dim()), Rational(0));
      ei[static_cast<size_t>(i)] = 1;
      ej[static_cast<size_t>(j2)] = 1;
      RVec br = g.bracket(ei, ej);
      Json entry = Json::array();
      for (const auto& x : br) entry.push_back(formatRational(x));
      row.push_back(std::move(entry));
    }
    c.push_back(std::move(row));
  }
  out["c"] = std::move(c);
  out["gram"] = rmatToJson(g.gram());
  if (g.wittBasis()) {
    Json w;
    w["w"] = rmatToJson(g.wittBasis()->first);
    w["wp"] = rmatToJson(g.wittBasis()->second);
    out["witt"] = std::move(w);
  }
  return out;
}

std::shared_ptr<const QuadraticLieAlgebra> qlaFromJson(const Json& j) {
  int n = j.at("dim").get<int>();
  std::vector<std::vector<RVec>> table(
      static_cast<size_t>(n),
      std::vector<RVec>(static_cast<size_t>(n), RVec(static_cast<size_t>(n), Rational(0))));
  const Json& c = j.at("c");
  for (int i = 0; i < n; ++i)
    for (int j2 = 0; j2 < n; ++j2)
      for (int k = 0; k < n; ++k)
        table[static_cast<size_t>(i)][static_cast<size_t>(j2)][static_cast<size_t>(k)] =
            parseRational(c.at(static_cast<size_t>(i))
                              .at(static_cast<size_t>(j2))
                              .at(static_cast<size_t>(k))
                              .get<std::string>());
  RMat gram = rmatFromJson(j.at("gram"));
  std::optional<std::pair<RMat, RMat>> witt;
  if (j.contains("witt"))
    witt = std::make_pair(rmatFromJson(j.at("witt").at("w")),
                          rmatFromJson(j.at("witt").at("wp")));
  return std::make_shared<const QuadraticLieAlgebra>(n, std::move(table),
                                                     std::move(gram), std::move(witt));
}

Json toJson(const CourantData& data, bool withFloat) {
  Json out;
  out["type"] = "courant-data";
  out["signature"] = toJson(data.sig());
  out["algebra"] = toJson(data.g());
  Json omega = Json::array();
  for (const auto& w : data.omegaB()) omega.push_back(tmatToJson(w, withFloat));
  out["omegaB"] = std::move(omega);
  Json a = Json::array();
  for (const auto& ai : data.A()) a.push_back(tmatToJson(ai, withFloat));
  out["A"] = std::move(a);
  Json r = Json::array();
  for (const auto& rk : data.R()) r.push_back(termsToJson(rk, withFloat));
  out["R"] = std::move(r);
  out["H"] = termsToJson(data.H(), withFloat);
  if (data.base()) {
    Json b;
    b["rB"] = rmatToJson(data.base()->rB);
    Json frakr = Json::array();
    for (const auto& f : data.base()->frakrB) frakr.push_back(termsToJson(f));
    b["frakrB"] = std::move(frakr);
    b["H3B"] = termsToJson(data.base()->H3B);
    Json h2 = Json::array();
    for (const auto& f : data.base()->H2B) h2.push_back(termsToJson(f));
    b["H2B"] = std::move(h2);
    out["base"] = std::move(b);
  }
  return out;
}

CourantData courantFromJson(const Json& j) {
  if (!j.contains("type") || j.at("type") != "courant-data")
    throw ParseError("expected a courant-data document");
  SigPtr sig = sigFromJson(j.at("signature"));
  auto g = qlaFromJson(j.at("algebra"));
  std::vector<TMat> omega;
  for (const auto& w : j.at("omegaB")) omega.push_back(tmatFromJson(w, sig->baseDim()));
  std::vector<TMat> a;
  for (const auto& ai : j.at("A")) a.push_back(tmatFromJson(ai, sig->baseDim()));
  GForm r;
  for (const auto& rk : j.at("R")) r.push_back(termsFromJson(rk, sig));
  InvariantForm h = termsFromJson(j.at("H"), sig);
  std::optional<BaseRecord> base;
  if (j.contains("base")) {
    auto bs = ComplexSignature::base(sig->baseDim());
    BaseRecord rec;
    rec.rB = rmatFromJson(j.at("base").at("rB"));
    for (const auto& f : j.at("base").at("frakrB"))
      rec.frakrB.push_back(termsFromJson(f, bs));
    rec.H3B = termsFromJson(j.at("base").at("H3B"), bs);
    for (const auto& f : j.at("base").at("H2B"))
      rec.H2B.push_back(termsFromJson(f, bs));
    base = std::move(rec);
  }
  return CourantData(sig, g, std::move(omega), std::move(a), std::move(r),
                     std::move(h), std::move(base));
}

Json toJson(const Section& s, const SigPtr& sig, bool withFloat) {
  Json out;
  out["xi"] = termsToJson(s.xi, withFloat);
  Json r = Json::array();
  for (const auto& x : s.r) r.push_back(toJson(x, withFloat));
  out["r"] = std::move(r);
  Json vec = Json::array();
  for (const auto& x : s.vec) vec.push_back(toJson(x, withFloat));
  out["vec"] = std::move(vec);
  (void)sig;
  return out;
}

Section sectionFromJson(const Json& j, const CourantData& data) {
  Section s = Section::zero(data.sig(), data.n());
  s.xi = termsFromJson(j.at("xi"), data.sig());
  size_t i = 0;
  for (const auto& x : j.at("r")) s.r.at(i++) = trigFromJson(x, data.baseDim());
  i = 0;
  for (const auto& x : j.at("vec")) s.vec.at(i++) = trigFromJson(x, data.baseDim());
  return s;
}

Json toJson(const InvariantSpinor& s, bool withFloat) {
  Json out;
  Json terms = Json::array();
  for (const auto& [key, c] : s.terms()) {
    Json t;
    t["gens"] = maskToNames(s.signature(), key.first);
    std::vector<int> fock;
    for (int b = 0; b < s.fock()->halfDim(); ++b)
      if (key.second & (1u << b)) fock.push_back(b + 1);
    t["fock"] = fock;
    t["coeff"] = toJson(c, withFloat);
    terms.push_back(std::move(t));
  }
  out["terms"] = std::move(terms);
  return out;
}

InvariantSpinor spinorFromJson(const Json& j, const CourantData& data) {
  InvariantSpinor s(data.sig(), data.fockPtr());
  for (const auto& t : j.at("terms")) {
    uint32_t fockMask = 0;
    for (const auto& b : t.at("fock"))
      fockMask |= 1u << (b.get<int>() - 1);
    s.addTerm(namesToMask(data.sig(), t.at("gens")), fockMask,
              trigFromJson(t.at("coeff"), data.baseDim()));
  }
  return s;
}

Json toJson(const IsoData& iso, bool withFloat) {
  Json out;
  out["beta"] = termsToJson(iso.beta, withFloat);
  out["K"] = rmatToJson(iso.K);
  if (iso.logK) out["logK"] = rmatToJson(*iso.logK);
  Json phi = Json::array();
  for (const auto& p : iso.phi) phi.push_back(termsToJson(p, withFloat));
  out["phi"] = std::move(phi);
  return out;
}

Json toJson(const DualityPackage& pkg, bool withFloat) {
  Json out;
  out["type"] = "duality-package";
  out["source"] = toJson(pkg.source, withFloat);
  out["dual"] = toJson(pkg.dual, withFloat);
  out["F"] = toJson(pkg.F, withFloat);
  out["rTilde"] = rmatToJson(pkg.rTilde);
  Json kf = Json::array();
  for (const auto& f : pkg.kforms) kf.push_back(termsToJson(f, withFloat));
  out["kforms"] = std::move(kf);
  return out;
}

DualityPackage packageFromJson(const Json& j) {
  if (!j.contains("type") || j.at("type") != "duality-package")
    throw ParseError("expected a duality-package document");
  CourantData source = courantFromJson(j.at("source"));
  CourantData dual = courantFromJson(j.at("dual"));
  // rebuild the correspondence complex from the two signatures
  std::vector<std::string> names;
  std::vector<GenKind> kinds;
  std::vector<InvariantForm> curvatures;
  for (int i = 0; i < source.fiberCount(); ++i) {
    names.push_back(source.sig()->fiberGen(i).name);
    kinds.push_back(GenKind::Theta);
    curvatures.push_back(*source.sig()->fiberGen(i).curvature);
  }
  for (int i = 0; i < dual.fiberCount(); ++i) {
    names.push_back(dual.sig()->fiberGen(i).name);
    kinds.push_back(GenKind::ThetaTilde);
    curvatures.push_back(*dual.sig()->fiberGen(i).curvature);
  }
  SigPtr sigN = ComplexSignature::make(source.baseDim(), names, kinds, curvatures);
  IsoData f = IsoData::identity(sigN, source.n());
  f.beta = termsFromJson(j.at("F").at("beta"), sigN);
  f.K = rmatFromJson(j.at("F").at("K"));
  if (j.at("F").contains("logK")) f.logK = rmatFromJson(j.at("F").at("logK"));
  f.phi.clear();
  for (const auto& p : j.at("F").at("phi")) f.phi.push_back(termsFromJson(p, sigN));
  std::vector<RVec> rTilde = rmatFromJson(j.at("rTilde"));
  std::vector<InvariantForm> kforms;
  auto bs = ComplexSignature::base(source.baseDim());
  for (const auto& kf : j.at("kforms")) kforms.push_back(termsFromJson(kf, bs));
  CourantData sourceN = pullbackToCorrespondence(source, sigN);
  CourantData dualN = pullbackToCorrespondence(dual, sigN);
  return DualityPackage{std::move(source), std::move(dual),   sigN,
                        std::move(sourceN), std::move(dualN), std::move(f),
                        std::move(rTilde),  std::move(kforms)};
}

Json toJson(const ResidualReport& report, bool withFloat) {
  Json out = Json::array();
  for (const auto& item : report.items) {
    Json e;
    e["name"] = item.name;
    e["isZero"] = item.isZero();
    Json forms = Json::array();
    for (const auto& f : item.forms)
      if (!f.isZero()) forms.push_back(termsToJson(f, withFloat));
    e["forms"] = std::move(forms);
    out.push_back(std::move(e));
  }
  return out;
}

std::string digest(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace ctd::io
