#include "polylet/corpus.hpp"

#include <stdexcept>

#include "polylet/parser.hpp"

namespace polylet {

namespace {

CorpusEntry staged(std::string name, std::string text, std::string type) {
  CorpusEntry e;
  e.name = std::move(name);
  e.text = std::move(text);
  e.staged_type = std::move(type);
  return e;
}

CorpusEntry staged_reject(std::string name, std::string text) {
  CorpusEntry e;
  e.name = std::move(name);
  e.text = std::move(text);
  e.staged_accept = false;
  e.host_accept = false;
  return e;
}

CorpusEntry host(std::string name, std::string text, bool accept) {
  CorpusEntry e;
  e.name = std::move(name);
  e.language = CorpusLanguage::Host;
  e.text = std::move(text);
  e.staged_accept = false;
  e.host_accept = accept;
  return e;
}

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> out;
  auto add = [&](CorpusEntry e) -> CorpusEntry& { return out.emplace_back(std::move(e)); };

  // let-polymorphism without staging
  add(staged("shared_singleton", "let x = [1] in (2 :: x, 3 :: x)", "int list * int list"))
      .result = "([2; 1], [3; 1])";
  add(staged("shared_empty", R"(let x = [] in (2 :: x, "3" :: x))", "int list * string list"))
      .result = R"(([2], ["3"]))";
  add(staged("expansive_empty",
             R"(let x = (let u = rset (ref []) 0 in []) in (2 :: x, "3" :: x))",
             "int list * string list"))
      .result = R"(([2], ["3"]))";
  add(staged("rset_shared_cell", "let x = ref [1] in (rset x 2, rset x 3)", "int list * int list"))
      .result = "([2; 3; 1], [3; 1])";
  add(staged("rset_fresh_cells", "(rset (ref [1]) 2, rset (ref [1]) 3)", "int list * int list"))
      .result = "([2; 1], [3; 1])";
  add(staged_reject("rset_poly_cell", R"(let x = ref [] in (rset x 2, rset x "3"))"));
  add(staged("deref_fresh_cell", R"(let x = let r = ref [] in !r in (2 :: x, "3" :: x))",
             "int list * string list"))
      .result = R"(([2], ["3"]))";

  // brackets, escapes, CSP
  {
    auto& e = add(staged("code_sum", ".<1 + 2>.", "int code"));
    e.quote_output = "1 + 2";
    e.result = "3";
  }
  {
    auto& e = add(staged("splice_sum", "let c = .<1 + 2>. in .<fun x -> .~c + x>.", "(int -> int) code"));
    e.quote_output = "fun x -> (1 + 2) + x";
    e.arg = "2";
    e.result = "5";
  }
  add(staged("hygiene_same_name", ".<fun x -> .~(let body = .<x>. in .<fun x -> .~body>.)>.",
             "('a -> 'b -> 'a) code"))
      .quote_output = "fun x -> fun y -> x";
  add(staged("hygiene_other_name", ".<fun y -> .~(let body = .<y>. in .<fun x -> .~body>.)>.",
             "('a -> 'b -> 'a) code"))
      .quote_output = "fun x -> fun y -> x";
  {
    auto& e = add(staged("csp_lift", "let lift = fun v -> .<%v>. in .<fun x -> .~(lift (1 + 2)) + x>.",
                         "(int -> int) code"));
    e.quote_output = "fun x -> 3 + x";
    e.arg = "2";
    e.result = "5";
  }
  {
    auto& e = add(staged("csp_let", ".<fun x -> .~(let y = 1 + 2 in .<%y>.) + x>.", "(int -> int) code"));
    e.quote_output = "fun x -> 3 + x";
    e.arg = "2";
    e.result = "5";
  }
  {
    auto& e = add(staged("csp_shared_cell", "let r = ref [] in .<rset %r 0>.", "int list code"));
    e.result = "[0]";
    e.mutable_csp = true;
  }

  // polymorphic lets inside brackets
  {
    auto& e = add(staged("quoted_shared_singleton", ".<let x = 1 :: [] in (2 :: x, 3 :: x)>.",
                         "(int list * int list) code"));
    e.quote_output = "let x = 1 :: [] in (2 :: x, 3 :: x)";
    e.result = "([2; 1], [3; 1])";
  }
  {
    auto& e = add(staged("quoted_shared_empty", R"(.<let x = [] in (2 :: x, "3" :: x)>.)",
                         "(int list * string list) code"));
    e.quote_output = R"(let x = [] in (2 :: x, "3" :: x))";
    e.string_output = R"(let t_1 = [] in ((2 :: t_1), ("3" :: t_1)))";
    e.result = R"(([2], ["3"]))";
  }
  {
    auto& e = add(staged("quoted_poly_id", R"(.<let f = fun x -> x in (f 2, f "3")>.)", "(int * string) code"));
    e.quote_output = R"(let f = fun x -> x in (f 2, f "3"))";
    e.string_output = R"(let t_2 = fun x_1 -> x_1 in ((t_2 2), (t_2 "3")))";
    e.result = R"((2, "3"))";
  }
  add(staged_reject("quoted_poly_cell", R"(.<let x = ref [] in (rset x 2, rset x "3")>.)"));
  {
    auto& e = add(staged("quoted_thunk_cell", R"(.<let f = fun () -> ref [] in (rset (f ()) 2, rset (f ()) "3")>.)",
                         "(int list * string list) code"));
    e.quote_output = R"(let f = fun () -> ref [] in (rset (f ()) 2, rset (f ()) "3"))";
    e.result = R"(([2], ["3"]))";
  }
  {
    auto& e = add(staged("quoted_lifted_cell",
                         "let lift = fun v -> .<%v>. in\n"
                         R"(.<let f = fun () -> .~(lift (ref [])) in (rset (f ()) 2, rset (f ()) "3")>.)",
                         "(int list * string list) code"));
    e.run_error = DiagnosticKind::SoundnessViolation;
    e.mutable_csp = true;
  }
  add(staged_reject("quoted_expansive_fun",
                    R"(.<let f = let r = ref [] in fun x -> rset r x in (f 1, f "3")>.)"));
  {
    auto& e = add(staged("quoted_let_outside_fun", ".<let y = 1 + 2 in fun x -> x + y>.", "(int -> int) code"));
    e.quote_output = "let y = 1 + 2 in fun x -> x + y";
    e.string_output = "let t_1 = (1 + 2) in fun x_2 -> (x_2 + t_1)";
    e.arg = "2";
    e.result = "5";
  }
  add(staged("quoted_splice_fun", "fun x -> .<fun y -> (y + 1) :: .~x>.",
             "int list code -> (int -> int list) code"));

  // hand-written combinator programs
  add(host("comb_splice_fun", "fun x -> lam (fun y -> cons (add y (int 1)) x)", true));
  {
    auto& e = add(host("comb_genlet", "new_scope @@ fun p -> lam (fun x -> add x (genlet p (add (int 1) (int 2))))", true));
    e.quote_output = "let y = 1 + 2 in fun x -> x + y";
    e.string_output = "let t_2 = (1 + 2) in fun x_1 -> (x_1 + t_2)";
    e.arg = "2";
    e.result = "5";
  }
  {
    auto& e = add(host("comb_shared_empty",
                       R"(new_scope @@ fun p -> let x = genlet p nil in pair (cons (int 2) x) (cons (str "3") x))",
                       true));
    e.quote_output = R"(let x = [] in (2 :: x, "3" :: x))";
    e.result = R"(([2], ["3"]))";
  }
  {
    auto& e = add(host("comb_inlined_empty",
                       R"(new_scope @@ fun p -> let x = nil in pair (cons (int 2) x) (cons (str "3") x))", true));
    e.quote_output = R"((2 :: [], "3" :: []))";
    e.result = R"(([2], ["3"]))";
  }
  add(host("comb_poly_cell",
           R"(new_scope @@ fun p -> let x = genlet p (ref_ nil) in pair (rset x (int 2)) (rset x (str "3")))",
           false));
  {
    auto& e = add(host("comb_extrusion", "new_scope @@ fun p -> lam (fun x -> add x (genlet p (add x (int 2))))", true));
    e.run_error = DiagnosticKind::ScopeExtrusion;
  }
  add(host("comb_genlet_fun",
           R"(new_scope @@ fun p -> let f = genlet p (lam (fun x -> x)) in pair (app f (int 1)) (app f (str "3")))",
           false));
  add(host("comb_genlet_expansive_fun",
           "new_scope @@ fun p1 ->\n"
           "  let f = genlet p1 (new_scope @@ fun p2 -> let r = genlet p2 (ref_ nil) in lam (fun x -> rset r x)) in\n"
           R"(  pair (app f (int 1)) (app f (str "3")))",
           false));
  {
    auto& e = add(host("comb_thunk", R"(let f = fun () -> lam (fun x -> x) in pair (app (f ()) (int 1)) (app (f ()) (str "3")))",
                       true));
    e.quote_output = R"(((fun x -> x) 1, (fun y -> y) "3"))";
    e.string_output = R"((((fun x_2 -> x_2) 1), ((fun x_1 -> x_1) "3")))";
    e.result = R"((1, "3"))";
  }
  {
    auto& e = add(host("comb_thunk_genlet",
                       "new_scope @@ fun p ->\n"
                       R"(let f = fun () -> genlet p (lam (fun x -> x)) in pair (app (f ()) (int 1)) (app (f ()) (str "3")))",
                       true));
    e.quote_output = R"(let a = fun x -> x in let b = fun y -> y in (b 1, a "3"))";
    e.string_output = R"(let t_2 = fun x_1 -> x_1 in let t_4 = fun x_3 -> x_3 in ((t_4 1), (t_2 "3")))";
    e.result = R"((1, "3"))";
  }
  {
    auto& e = add(host("comb_genletfun",
                       "new_funscope @@ fun p ->\n"
                       R"(let f = fun () -> genletfun p (fun x -> x) in pair (app (f ()) (int 1)) (app (f ()) (str "3")))",
                       true));
    e.quote_output = R"(let f = fun x -> x in (f 1, f "3"))";
    e.string_output = R"(let t_2 = fun x_1 -> x_1 in ((t_2 1), (t_2 "3")))";
    e.result = R"((1, "3"))";
  }
  {
    auto& e = add(host("comb_genletfun_cell",
                       "new_funscope @@ fun p ->\n"
                       "  let f = fun () -> genletfun p (fun _ -> csp (ref [])) in\n"
                       R"(  pair (rset (app (f ()) (csp ())) (int 1)) (rset (app (f ()) (csp ())) (str "3")))",
                       true));
    e.run_error = DiagnosticKind::SoundnessViolation;
    e.mutable_csp = true;
  }
  return out;
}

std::vector<KnownDivergence> build_divergences() {
  return {
      {R"(.<let x = ((fun y -> y), 1) in (x :: ((fun z -> z + 1), 2) :: [], x :: ((fun s -> "a"), 3) :: [])>.)",
       "a pair of a function and an int is a value, so the staged checker generalizes it; the "
       "translation binds it with genlet, whose type is not covariant, and no genletX exists for pairs"},
      {R"(let c = .<fun x -> x>. in (.<.~c 1>., .<.~c "a">.))",
       "a bracket is non-expansive, so the level-0 let generalizes the code of a polymorphic function; "
       "its translation is a combinator application of a non-covariant cod type"},
  };
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry& corpus_entry(std::string_view name) {
  for (const auto& e : corpus()) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no corpus entry named " + std::string(name));
}

const std::vector<KnownDivergence>& known_divergences() {
  static const std::vector<KnownDivergence> entries = build_divergences();
  return entries;
}

bool is_known_divergence(const SourceExpr& e) {
  static const std::vector<SourceExpr> parsed = [] {
    std::vector<SourceExpr> out;
    for (const auto& d : known_divergences()) out.push_back(parse_source(d.text));
    return out;
  }();
  for (const auto& p : parsed) {
    if (alpha_equal(p, e)) return true;
  }
  return false;
}

}  // namespace polylet
