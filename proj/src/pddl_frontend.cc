#include "pddl_frontend.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace std;
using task_model::FactSet;
using task_model::FactTable;
using task_model::GroundAction;
using task_model::PlanningTask;
using task_model::State;

namespace pddl {

ParseError::ParseError(const string &msg, int line, int column)
    : runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line(line),
      column(column) {
}

namespace {

struct Token {
    enum Kind { lparen, rparen, symbol, end } kind;
    string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        int line = line_, column = column_;
        if (pos_ >= text_.size())
            return {Token::end, "", line, column};
        char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::lparen, "(", line, column};
        }
        if (c == ')') {
            advance();
            return {Token::rparen, ")", line, column};
        }
        string sym;
        while (pos_ < text_.size() && !is_delimiter(text_[pos_])) {
            sym.push_back(text_[pos_]);
            advance();
        }
        return {Token::symbol, sym, line, column};
    }

private:
    static bool is_delimiter(char c) {
        return c == '(' || c == ')' || c == ';' || isspace(static_cast<unsigned char>(c));
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

string lowercase(string_view s) {
    string out(s);
    for (char &c : out)
        c = static_cast<char>(tolower(static_cast<unsigned char>(c)));
    return out;
}

// Keywords compare case-insensitively; names stay case-sensitive.
bool is_keyword(const Token &t, string_view keyword) {
    return t.kind == Token::symbol && lowercase(t.text) == keyword;
}

bool valid_name(string_view s) {
    if (s.empty() || !isalpha(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (!isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            return false;
    return true;
}

class Parser {
public:
    explicit Parser(string_view text) : lexer_(text) { shift(); }

    Domain parse_domain() {
        Domain d;
        expect_lparen();
        expect_keyword("define");
        expect_lparen();
        expect_keyword("domain");
        d.name = expect_name("domain name");
        expect_rparen();

        if (at_section(":requirements")) {
            shift();  // '('
            shift();  // ':requirements'
            while (current_.kind == Token::symbol) {
                if (current_.text.empty() || current_.text[0] != ':')
                    fail("expected a :requirement flag");
                shift();
            }
            expect_rparen();
        }

        if (at_section(":types")) {
            shift();
            shift();
            parse_typed_list([&](const string &name, const string &parent) {
                if (!valid_name(name))
                    fail("invalid type name '" + name + "'");
                if (find(d.types.begin(), d.types.end(), name) != d.types.end())
                    fail("duplicate type '" + name + "'");
                d.types.push_back(name);
                d.supertype[name] = parent;
            });
            expect_rparen();
            for (const auto &[type, parent] : d.supertype)
                if (parent != "object" && !d.has_type(parent))
                    fail("type '" + type + "' has undeclared supertype '" + parent + "'");
            for (const string &type : d.types) {
                string current = type;
                size_t steps = 0;
                while (current != "object") {
                    auto it = d.supertype.find(current);
                    if (it == d.supertype.end())
                        break;
                    current = it->second;
                    if (++steps > d.types.size())
                        fail("type '" + type + "' sits in a supertype cycle");
                }
            }
        }

        if (!at_section(":predicates"))
            fail("expected (:predicates ...)");
        shift();
        shift();
        while (current_.kind == Token::lparen) {
            PredicateDecl decl;
            shift();
            decl.name = expect_name("predicate name");
            parse_typed_list([&](const string &var, const string &type) {
                if (var.empty() || var[0] != '?')
                    fail("predicate parameters must be variables, got '" + var + "'");
                check_type_declared(d, type);
                decl.param_types.push_back(type);
            });
            expect_rparen();
            for (const PredicateDecl &other : d.predicates)
                if (other.name == decl.name && other.param_types == decl.param_types)
                    fail("duplicate predicate declaration '" + decl.name + "'");
            d.predicates.push_back(move(decl));
        }
        expect_rparen();

        while (current_.kind == Token::lparen) {
            d.schemas.push_back(parse_action(d));
        }
        expect_rparen();
        expect_end();
        return d;
    }

    ObjectUniverse parse_problem(const Domain &domain) {
        ObjectUniverse u;
        expect_lparen();
        expect_keyword("define");
        expect_lparen();
        expect_keyword("problem");
        u.problem_name = expect_name("problem name");
        expect_rparen();

        expect_lparen();
        expect_keyword(":domain");
        u.domain_name = expect_name("domain reference");
        expect_rparen();
        if (u.domain_name != domain.name)
            fail("problem references domain '" + u.domain_name + "' but '" + domain.name + "' was parsed");

        if (at_section(":objects")) {
            shift();
            shift();
            parse_typed_list([&](const string &name, const string &type) {
                if (!valid_name(name))
                    fail("invalid object name '" + name + "'");
                check_type_declared(domain, type);
                for (const auto &[existing, _] : u.objects)
                    if (existing == name)
                        fail("duplicate object '" + name + "'");
                u.objects.emplace_back(name, type);
            });
            expect_rparen();
        }

        if (!at_section(":init"))
            fail("expected (:init ...)");
        shift();
        shift();
        while (current_.kind == Token::lparen)
            u.init.push_back(parse_object_atom(domain, u));
        expect_rparen();

        if (!at_section(":goal"))
            fail("expected (:goal ...)");
        shift();
        shift();
        expect_lparen();
        if (is_keyword(current_, "and")) {
            shift();
            while (current_.kind == Token::lparen)
                u.goal.push_back(parse_object_atom(domain, u));
            expect_rparen();
        } else {
            // bare-atom shorthand for a single-conjunct goal
            u.goal.push_back(parse_object_atom_body(domain, u));
        }
        expect_rparen();
        expect_rparen();
        expect_end();
        return u;
    }

private:
    void shift() { current_ = lexer_.next(); }

    [[noreturn]] void fail(const string &msg) const {
        throw ParseError(msg, current_.line, current_.column);
    }

    void expect_lparen() {
        if (current_.kind != Token::lparen)
            fail("expected '('");
        shift();
    }

    void expect_rparen() {
        if (current_.kind != Token::rparen)
            fail("expected ')'");
        shift();
    }

    void expect_end() {
        if (current_.kind != Token::end)
            fail("trailing input after closing ')'");
    }

    void expect_keyword(string_view kw) {
        if (!is_keyword(current_, kw))
            fail("expected '" + string(kw) + "'");
        shift();
    }

    string expect_name(const string &what) {
        if (current_.kind != Token::symbol || !valid_name(current_.text))
            fail("expected " + what);
        string name = current_.text;
        shift();
        return name;
    }

    string expect_symbol(const string &what) {
        if (current_.kind != Token::symbol)
            fail("expected " + what);
        string text = current_.text;
        shift();
        return text;
    }

    // Lookahead for "( :section" without consuming.
    bool at_section(string_view section) {
        if (current_.kind != Token::lparen)
            return false;
        Lexer saved_lexer = lexer_;
        Token after = lexer_.next();
        lexer_ = saved_lexer;
        return after.kind == Token::symbol && lowercase(after.text) == section;
    }

    void check_type_declared(const Domain &d, const string &type) {
        if (type != "object" && !d.has_type(type))
            fail("undeclared type '" + type + "'");
    }

    /*
      Typed list: NAME... [- TYPE] groups, repeated until ')'. Names without
      a trailing type default to "object". Calls sink(name, type) in
      declaration order.
    */
    void parse_typed_list(const std::function<void(const string &, const string &)> &sink) {
        vector<string> pending;
        while (current_.kind == Token::symbol) {
            if (current_.text == "-") {
                shift();
                string type = expect_symbol("type name");
                if (!valid_name(type))
                    fail("invalid type name '" + type + "'");
                if (pending.empty())
                    fail("dangling '-' in typed list");
                for (const string &name : pending)
                    sink(name, type);
                pending.clear();
            } else {
                pending.push_back(current_.text);
                shift();
            }
        }
        for (const string &name : pending)
            sink(name, "object");
    }

    LiftedSchema parse_action(const Domain &d) {
        LiftedSchema schema;
        expect_lparen();
        expect_keyword(":action");
        schema.name = expect_name("action name");

        expect_keyword(":parameters");
        expect_lparen();
        parse_typed_list([&](const string &var, const string &type) {
            if (var.empty() || var[0] != '?' || !valid_name(var.substr(1)))
                fail("invalid parameter '" + var + "'");
            if (find(schema.param_names.begin(), schema.param_names.end(), var) != schema.param_names.end())
                fail("duplicate parameter '" + var + "'");
            check_type_declared(d, type);
            schema.param_names.push_back(var);
            schema.param_types.push_back(type);
        });
        expect_rparen();

        expect_keyword(":precondition");
        expect_lparen();
        if (is_keyword(current_, "and")) {
            shift();
            while (current_.kind == Token::lparen)
                schema.pre.push_back(parse_var_atom(d, schema));
            expect_rparen();
        } else {
            // bare-atom shorthand, as used by published schemas
            schema.pre.push_back(parse_var_atom_body(d, schema));
        }

        expect_keyword(":effect");
        schema.branches = parse_effect(d, schema);
        Rational sum = 0;
        for (const EffectBranch &b : schema.branches)
            sum += b.prob;
        if (sum != 1)
            fail("effect probabilities sum to " + rationals::to_string(sum));

        expect_rparen();
        return schema;
    }

    vector<EffectBranch> parse_effect(const Domain &d, const LiftedSchema &schema) {
        expect_lparen();
        if (is_keyword(current_, "and")) {
            shift();
            EffectBranch branch;
            branch.prob = 1;
            while (current_.kind == Token::lparen) {
                Token saved = current_;
                shift();
                if (is_keyword(current_, "not")) {
                    shift();
                    branch.del.push_back(parse_var_atom(d, schema));
                    expect_rparen();
                } else {
                    branch.add.push_back(parse_var_atom_body(d, schema));
                    (void)saved;
                }
            }
            expect_rparen();
            return {branch};
        }
        if (is_keyword(current_, "probabilistic")) {
            shift();
            vector<EffectBranch> branches;
            Rational sum = 0;
            while (current_.kind == Token::symbol) {
                Rational prob;
                try {
                    prob = rationals::parse(current_.text);
                } catch (const invalid_argument &e) {
                    fail(string("bad probability: ") + e.what());
                }
                if (prob <= 0)
                    fail("probability must be positive, got " + rationals::to_string(prob));
                shift();
                // nested effects multiply through
                for (EffectBranch b : parse_effect(d, schema)) {
                    b.prob *= prob;
                    branches.push_back(move(b));
                }
                sum += prob;
            }
            if (branches.empty())
                fail("probabilistic effect with no branches");
            if (sum != 1)
                fail("probabilities sum to " + rationals::to_string(sum));
            expect_rparen();
            return branches;
        }
        fail("expected (and ...) or (probabilistic ...) effect");
    }

    // Atom with '(' already pending; parses "(pred args...)".
    Atom parse_var_atom(const Domain &d, const LiftedSchema &schema) {
        expect_lparen();
        return parse_var_atom_body(d, schema);
    }

    Atom parse_var_atom_body(const Domain &d, const LiftedSchema &schema) {
        string pred = expect_name("predicate name");
        vector<string> args;
        while (current_.kind == Token::symbol) {
            const string &arg = current_.text;
            if (arg.empty() || arg[0] != '?')
                fail("atom arguments in a domain must be variables, got '" + arg + "'");
            if (find(schema.param_names.begin(), schema.param_names.end(), arg) == schema.param_names.end())
                fail("variable '" + arg + "' is not a parameter of action '" + schema.name + "'");
            args.push_back(arg);
            shift();
        }
        vector<string> arg_types;
        for (const string &arg : args) {
            size_t i = find(schema.param_names.begin(), schema.param_names.end(), arg) - schema.param_names.begin();
            arg_types.push_back(schema.param_types[i]);
        }
        Atom atom;
        atom.predicate = resolve_predicate(d, pred, arg_types);
        atom.args = move(args);
        expect_rparen();
        return atom;
    }

    Atom parse_object_atom(const Domain &d, const ObjectUniverse &u) {
        expect_lparen();
        return parse_object_atom_body(d, u);
    }

    Atom parse_object_atom_body(const Domain &d, const ObjectUniverse &u) {
        string pred = expect_name("predicate name");
        vector<string> args;
        vector<string> arg_types;
        while (current_.kind == Token::symbol) {
            const string &arg = current_.text;
            auto it = find_if(u.objects.begin(), u.objects.end(),
                              [&](const auto &obj) { return obj.first == arg; });
            if (it == u.objects.end())
                fail("unknown object '" + arg + "'");
            args.push_back(arg);
            arg_types.push_back(it->second);
            shift();
        }
        Atom atom;
        atom.predicate = resolve_predicate(d, pred, arg_types);
        atom.args = move(args);
        expect_rparen();
        return atom;
    }

    /*
      Overload resolution: predicates may share a name as long as their
      parameter types differ; an atom matches a declaration when the name and
      arity agree and every argument type is a subtype of the declared
      parameter type. Exactly one declaration must match.
    */
    int resolve_predicate(const Domain &d, const string &name, const vector<string> &arg_types) {
        int match = -1;
        for (int i = 0; i < static_cast<int>(d.predicates.size()); ++i) {
            const PredicateDecl &decl = d.predicates[i];
            if (decl.name != name || decl.param_types.size() != arg_types.size())
                continue;
            bool compatible = true;
            for (size_t k = 0; k < arg_types.size(); ++k)
                if (!d.type_is(arg_types[k], decl.param_types[k]))
                    compatible = false;
            if (!compatible)
                continue;
            if (match != -1)
                fail("ambiguous atom '" + name + "': several predicate declarations match");
            match = i;
        }
        if (match == -1)
            fail("no predicate declaration matches atom '" + name + "' with " +
                 std::to_string(arg_types.size()) + " argument(s)");
        return match;
    }

    Lexer lexer_;
    Token current_;
};

}  // namespace

bool Domain::has_type(string_view t) const {
    return find(types.begin(), types.end(), t) != types.end();
}

bool Domain::type_is(string_view sub, string_view super) const {
    if (super == "object")
        return true;
    string current(sub);
    // Bounded walk: a chain longer than the hierarchy means a cycle, which
    // parse_domain rejects; hand-built cyclic maps degrade to "no".
    for (size_t steps = 0; steps <= supertype.size(); ++steps) {
        if (current == super)
            return true;
        auto it = supertype.find(current);
        if (it == supertype.end() || it->second == "object")
            return false;
        current = it->second;
    }
    return false;
}

string ObjectUniverse::type_of(string_view object) const {
    for (const auto &[name, type] : objects)
        if (name == object)
            return type;
    throw invalid_argument("unknown object '" + string(object) + "'");
}

Domain parse_domain(string_view text) {
    Parser parser(text);
    return parser.parse_domain();
}

ObjectUniverse parse_problem(string_view text, const Domain &domain) {
    Parser parser(text);
    return parser.parse_problem(domain);
}

namespace {

string format_ground_name(const string &head, const vector<string> &args) {
    if (args.empty())
        return head;
    string out = head + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i)
            out += ",";
        out += args[i];
    }
    out += ")";
    return out;
}

// All objects whose type fits, sorted by name. The sort fixes the
// lexicographic tuple order used for both facts and action bindings.
vector<string> candidates_for_type(const Domain &d, const ObjectUniverse &u, const string &type) {
    vector<string> names;
    for (const auto &[name, obj_type] : u.objects)
        if (d.type_is(obj_type, type))
            names.push_back(name);
    sort(names.begin(), names.end());
    return names;
}

// Enumerates tuples over per-position candidate lists in lexicographic order.
void for_each_tuple(const vector<vector<string>> &candidates,
                    const std::function<void(const vector<string> &)> &sink) {
    vector<string> tuple(candidates.size());
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (pos == candidates.size()) {
            sink(tuple);
            return;
        }
        for (const string &name : candidates[pos]) {
            tuple[pos] = name;
            rec(pos + 1);
        }
    };
    rec(0);
}

}  // namespace

PlanningTask ground(const Domain &domain, const ObjectUniverse &universe, const GroundOptions &options) {
    // (predicate index, ground args) -> fact index
    map<pair<int, vector<string>>, int> fact_index;
    vector<string> fact_names;

    for (int pi = 0; pi < static_cast<int>(domain.predicates.size()); ++pi) {
        const PredicateDecl &pred = domain.predicates[pi];
        vector<vector<string>> candidates;
        for (const string &type : pred.param_types)
            candidates.push_back(candidates_for_type(domain, universe, type));
        for_each_tuple(candidates, [&](const vector<string> &tuple) {
            string name = format_ground_name(pred.name, tuple);
            if (static_cast<int>(fact_names.size()) >= options.max_facts)
                throw GroundingError("fact table overflow: more than " + std::to_string(options.max_facts) +
                                     " ground facts (cap configurable)");
            auto [_, inserted] = fact_index.emplace(make_pair(pi, tuple), static_cast<int>(fact_names.size()));
            if (!inserted)
                throw GroundingError("ground fact '" + name + "' generated twice; predicate declarations overlap");
            fact_names.push_back(move(name));
        });
    }

    PlanningTask task;
    try {
        task.facts = FactTable(fact_names);
    } catch (const invalid_argument &e) {
        throw GroundingError(string("fact table: ") + e.what());
    }

    auto atom_fact = [&](const Atom &atom, const vector<string> &args) {
        auto it = fact_index.find(make_pair(atom.predicate, args));
        if (it == fact_index.end())
            throw GroundingError("atom '" +
                                 format_ground_name(domain.predicates[atom.predicate].name, args) +
                                 "' does not denote a ground fact");
        return it->second;
    };

    task.init = State(task.facts.size());
    for (const Atom &atom : universe.init)
        task.init.set(atom_fact(atom, atom.args), true);

    {
        vector<int> goal;
        for (const Atom &atom : universe.goal)
            goal.push_back(atom_fact(atom, atom.args));
        task.goal = task_model::make_fact_set(move(goal));
    }

    for (const LiftedSchema &schema : domain.schemas) {
        vector<vector<string>> candidates;
        for (const string &type : schema.param_types)
            candidates.push_back(candidates_for_type(domain, universe, type));

        for_each_tuple(candidates, [&](const vector<string> &binding) {
            map<string, string> env;
            for (size_t i = 0; i < binding.size(); ++i)
                env[schema.param_names[i]] = binding[i];
            auto ground_atom = [&](const Atom &atom) {
                vector<string> args;
                for (const string &var : atom.args)
                    args.push_back(env.at(var));
                return atom_fact(atom, args);
            };

            GroundAction action;
            action.name = format_ground_name(schema.name, binding);
            {
                vector<int> pre;
                for (const Atom &atom : schema.pre)
                    pre.push_back(ground_atom(atom));
                action.pre = task_model::make_fact_set(move(pre));
            }

            bool ill_formed = false;
            bool any_effect = false;
            for (const EffectBranch &branch : schema.branches) {
                task_model::EffectOutcome outcome;
                outcome.prob = branch.prob;
                vector<int> add, del;
                for (const Atom &atom : branch.add)
                    add.push_back(ground_atom(atom));
                for (const Atom &atom : branch.del)
                    del.push_back(ground_atom(atom));
                outcome.add = task_model::make_fact_set(move(add));
                outcome.del = task_model::make_fact_set(move(del));
                for (int f : outcome.add)
                    if (task_model::fact_set_contains(outcome.del, f))
                        ill_formed = true;  // same fact added and deleted in one branch
                if (!outcome.add.empty() || !outcome.del.empty())
                    any_effect = true;
                action.outcomes.push_back(move(outcome));
            }
            if (ill_formed || !any_effect)
                return;  // dropped binding: ill-formed, or zero net effect everywhere
            task.actions.push_back(move(action));
        });
    }

    bool probabilistic = false;
    for (const GroundAction &a : task.actions)
        if (!a.classical())
            probabilistic = true;
    task.flavor = probabilistic ? task_model::Flavor::probabilistic : task_model::Flavor::classical;

    task_model::ValidationReport report = task_model::validate(task);
    if (!report.ok()) {
        string joined;
        for (const string &p : report.problems)
            joined += "\n  " + p;
        throw GroundingError("grounding produced an invalid task:" + joined);
    }
    return task;
}

pair<string, vector<string>> split_ground_name(const string &name) {
    size_t open = name.find('(');
    if (open == string::npos)
        return {name, {}};
    string head = name.substr(0, open);
    vector<string> args;
    size_t pos = open + 1;
    string current;
    for (; pos < name.size() && name[pos] != ')'; ++pos) {
        if (name[pos] == ',') {
            args.push_back(current);
            current.clear();
        } else {
            current.push_back(name[pos]);
        }
    }
    if (!current.empty() || !args.empty())
        args.push_back(current);
    return {head, args};
}

}  // namespace pddl
