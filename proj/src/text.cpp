#include "favor/text.hpp"

#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace favor::text {

namespace {

bool is_word_byte(unsigned char c) {
    if (c >= 0x80) return true;  // inside a UTF-8 sequence
    return std::isalnum(c) || c == '\'' || c == '-';
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

const std::unordered_map<std::string_view, std::string_view>& irregular_verbs() {
    static const std::unordered_map<std::string_view, std::string_view> map = {
        {"sat", "sit"},       {"stood", "stand"},   {"ran", "run"},       {"went", "go"},
        {"gone", "go"},       {"took", "take"},     {"taken", "take"},    {"got", "get"},
        {"gotten", "get"},    {"put", "put"},       {"fell", "fall"},     {"fallen", "fall"},
        {"held", "hold"},     {"left", "leave"},    {"threw", "throw"},   {"thrown", "throw"},
        {"drank", "drink"},   {"drunk", "drink"},   {"ate", "eat"},       {"eaten", "eat"},
        {"gave", "give"},     {"given", "give"},    {"came", "come"},     {"brought", "bring"},
        {"bought", "buy"},    {"caught", "catch"},  {"thought", "think"}, {"said", "say"},
        {"saw", "see"},       {"seen", "see"},      {"made", "make"},     {"wore", "wear"},
        {"worn", "wear"},     {"rose", "rise"},     {"risen", "rise"},    {"swung", "swing"},
        {"spun", "spin"},     {"bent", "bend"},     {"knelt", "kneel"},   {"crept", "creep"},
        {"slid", "slide"},    {"struck", "strike"}, {"shook", "shake"},   {"shaken", "shake"},
        {"flew", "fly"},      {"flown", "fly"},     {"drove", "drive"},   {"driven", "drive"},
        {"rode", "ride"},     {"ridden", "ride"},   {"swam", "swim"},     {"swum", "swim"},
        {"began", "begin"},   {"begun", "begin"},   {"woke", "wake"},     {"sang", "sing"},
        {"hung", "hang"},     {"dug", "dig"},       {"hit", "hit"},       {"set", "set"},
        {"let", "let"},       {"shut", "shut"},     {"spread", "spread"}, {"read", "read"},
        {"lay", "lie"},       {"lain", "lie"},      {"led", "lead"},      {"met", "meet"},
        {"kept", "keep"},     {"slept", "sleep"},   {"swept", "sweep"},   {"wept", "weep"},
        {"leapt", "leap"},    {"felt", "feel"},     {"built", "build"},   {"sent", "send"},
        {"spent", "spend"},   {"stuck", "stick"},   {"tore", "tear"},     {"torn", "tear"},
        {"broke", "break"},   {"broken", "break"},  {"chose", "choose"},  {"chosen", "choose"},
        {"froze", "freeze"},  {"frozen", "freeze"}, {"hid", "hide"},      {"hidden", "hide"},
        {"was", "be"},        {"were", "be"},       {"is", "be"},         {"are", "be"},
        {"am", "be"},         {"been", "be"},       {"being", "be"},      {"has", "have"},
        {"had", "have"},      {"does", "do"},       {"did", "do"},        {"done", "do"},
        {"knew", "know"},     {"known", "know"},    {"grew", "grow"},     {"grown", "grow"},
        {"drew", "draw"},     {"drawn", "draw"},    {"shot", "shoot"},    {"lit", "light"},
        {"found", "find"},    {"wound", "wind"},    {"bound", "bind"},    {"stole", "steal"},
        {"stolen", "steal"},  {"wrote", "write"},   {"written", "write"},
    };
    return map;
}

// Tokens the -s heuristic must never strip (common nouns/adverbs in -s).
const std::unordered_set<std::string_view>& s_exempt() {
    static const std::unordered_set<std::string_view> set = {
        "stairs", "glasses",  "clothes",   "pants",     "shorts",   "scissors",
        "always", "perhaps",  "towards",   "backwards", "forwards", "besides",
        "gas",    "bus",      "lens",      "focus",     "this",     "his",
        "its",    "is",       "was",       "has",       "does",     "yes",
        "sometimes", "upstairs", "downstairs", "belongings", "series", "less",
    };
    return set;
}

const std::unordered_set<std::string_view>& verb_bases() {
    static const std::unordered_set<std::string_view> set = {
        "walk",    "run",     "sit",      "stand",   "pick",    "put",     "take",
        "hold",    "open",    "close",    "turn",    "look",    "wave",    "jump",
        "grab",    "lift",    "move",     "push",    "pull",    "throw",   "catch",
        "pour",    "drink",   "eat",      "point",   "nod",     "shake",   "bend",
        "raise",   "lower",   "step",     "climb",   "fall",    "dance",   "spin",
        "slide",   "reach",   "touch",    "place",   "carry",   "drop",    "kick",
        "laugh",   "smile",   "talk",     "speak",   "gesture", "lean",    "kneel",
        "crouch",  "crawl",   "swim",     "fly",     "drive",   "ride",    "enter",
        "exit",    "leave",   "approach", "cross",   "wipe",    "wash",    "cut",
        "stir",    "mix",     "fold",     "write",   "read",    "type",    "swing",
        "toss",    "hand",    "give",     "remove",  "insert",  "attach",  "adjust",
        "press",   "tap",     "scroll",   "glance",  "stare",   "gaze",    "chase",
        "flee",    "hide",    "emerge",   "stumble", "trip",    "slip",    "roll",
        "flip",    "rotate",  "twist",    "stretch", "shrug",   "bounce",  "hop",
        "skip",    "march",   "stride",   "wander",  "stroll",  "jog",     "sprint",
        "dash",    "rush",    "hurry",    "pace",    "circle",  "dodge",   "duck",
        "dive",    "leap",    "scramble", "glide",   "drift",   "float",   "sink",
        "rise",    "ascend",  "descend",  "land",    "fling",   "hurl",    "shove",
        "drag",    "haul",    "tug",      "yank",    "snatch",  "scoop",   "sweep",
        "brush",   "pat",     "stroke",   "rub",     "scratch", "poke",    "pinch",
        "squeeze", "grip",    "clutch",   "release", "wrap",    "unwrap",  "tie",
        "untie",   "zip",     "unzip",    "fasten",  "loosen",  "tighten", "hang",
        "mount",   "board",   "bow",      "salute",  "clap",    "cheer",   "whistle",
        "shout",   "yell",    "whisper",  "sing",    "hum",     "chew",    "swallow",
        "sip",     "bite",    "lick",     "sniff",   "smell",   "blow",    "breathe",
        "cough",   "sneeze",  "yawn",     "blink",   "wink",    "frown",   "grin",
        "gasp",    "sigh",    "cry",      "sob",     "tremble", "shiver",  "shudder",
        "flinch",  "jerk",    "twitch",   "sway",    "rock",    "wobble",  "balance",
        "tilt",    "bob",     "dip",      "plunge",  "splash",  "spray",   "sprinkle",
        "scatter", "gather",  "collect",  "arrange", "stack",   "pile",    "sort",
        "shuffle", "deal",    "serve",    "slice",   "chop",    "peel",    "knead",
        "whisk",   "fry",     "cook",     "bake",    "boil",    "grill",   "scrub",
        "rinse",   "dry",     "polish",   "dust",    "vacuum",  "mop",     "iron",
        "sew",     "knit",    "paint",    "draw",    "sketch",  "erase",   "staple",
        "clip",    "pin",     "nail",     "hammer",  "drill",   "saw",     "screw",
        "measure", "mark",    "trace",    "straighten", "align", "plant",  "dig",
        "rake",    "water",   "prune",    "harvest", "mow",     "trim",    "feed",
        "pet",     "groom",   "recline",  "slump",   "sprawl",  "perch",   "squat",
        "stoop",   "twirl",   "flex",     "lunge",   "curl",    "row",     "volley",
        "dribble", "shoot",   "pass",     "tackle",  "block",   "punch",   "jab",
        "strike",  "slap",    "smack",    "whip",    "thrust",  "aim",     "fire",
        "pan",     "zoom",    "dolly",    "truck",   "track",   "follow",  "shift",
        "focus",   "sweep",   "cut",      "begin",   "start",   "stop",    "continue",
        "finish",  "end",     "pause",    "resume",  "repeat",  "wait",    "watch",
        "observe", "notice",  "see",      "stand",   "kneel",   "go",      "come",
        "get",     "bring",   "buy",      "think",   "say",     "make",    "wear",
        "keep",    "sleep",   "weep",     "feel",    "build",   "send",    "spend",
        "stick",   "tear",    "break",    "choose",  "freeze",  "lead",    "meet",
        "know",    "grow",    "find",     "wind",    "bind",    "steal",   "light",
        "wake",    "lie",     "use",      "show",    "point",   "wiggle",  "skate",
        "ski",     "pedal",   "steer",    "park",    "accelerate", "brake", "reverse",
        "wade",    "hike",    "trek",     "vault",   "slither", "gallop",  "trot",
        "limp",    "shuffle", "tiptoe",   "backpedal", "lob",   "flick",   "juggle",
        "spike",   "smash",   "swerve",   "veer",    "zigzag",  "pivot",   "lurch",
        "topple",  "collapse", "crumple", "kneel",   "genuflect", "embrace", "hug",
        "kiss",    "pat",     "tickle",   "nudge",   "elbow",   "shoulder", "headbutt",
        "stomp",   "stamp",   "tap",      "knock",   "rap",     "bang",    "slam",
        "wave",    "beckon",  "signal",   "motion",  "salute",  "applaud",
    };
    return set;
}

// Stems whose lost final 'e' must be restored after stripping -ing/-ed.
bool wants_final_e(std::string_view stem) {
    if (stem.size() < 2) return false;
    char last = stem.back();
    char prev = stem[stem.size() - 2];
    // wav+e, mov+e, danc+e, rid+e, glid+e, shak+e ...
    if (last == 'v' || last == 'c' || last == 'z') return true;
    if (last == 'u' && !is_vowel(prev)) return true;
    // single consonant after a lone vowel after a consonant: tak-, rid-, writ-
    if (!is_vowel(last) && last != 'w' && last != 'x' && last != 'y' && is_vowel(prev)) {
        if (stem.size() >= 3 && !is_vowel(stem[stem.size() - 3])) return true;
        if (stem.size() == 2) return true;
    }
    return false;
}

std::string strip_ing_ed(std::string lw, std::size_t suffix_len) {
    std::string stem = lw.substr(0, lw.size() - suffix_len);
    if (stem.size() >= 2 && stem.back() == stem[stem.size() - 2] && !is_vowel(stem.back()) &&
        stem.back() != 'l' && stem.back() != 's' && stem.back() != 'f' && stem.back() != 'z') {
        stem.pop_back();  // runn -> run, sitt -> sit
        return stem;
    }
    if (verb_bases().count(stem)) return stem;
    std::string with_e = stem + 'e';
    if (verb_bases().count(with_e)) return with_e;
    if (wants_final_e(stem)) return with_e;
    return stem;
}

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_word_byte(static_cast<unsigned char>(s[i]))) {
            std::size_t begin = i;
            while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({std::string(s.substr(begin, i - begin)), begin});
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view s) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t begin = 0;
    std::size_t i = 0;
    auto flush = [&](std::size_t end) {
        while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
        if (begin < end) spans.emplace_back(begin, end);
        begin = end;
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            flush(i);
            ++begin;
            ++i;
            continue;
        }
        if (c == '.' || c == '!' || c == '?') {
            bool decimal = c == '.' && i > 0 && i + 1 < s.size() &&
                           std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                           std::isdigit(static_cast<unsigned char>(s[i + 1]));
            if (!decimal) {
                while (i + 1 < s.size() &&
                       (s[i + 1] == '.' || s[i + 1] == '!' || s[i + 1] == '?' || s[i + 1] == '"' ||
                        s[i + 1] == '\''))
                    ++i;
                flush(i + 1);
            }
        }
        ++i;
    }
    flush(s.size());
    return spans;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_punct(std::string_view s) {
    std::size_t b = 0, e = s.size();
    auto is_strip = [](unsigned char c) {
        return c < 0x80 && (std::ispunct(c) || std::isspace(c));
    };
    while (b < e && is_strip(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_strip(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string collapse_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = true;
    for (char c : s) {
        if (static_cast<unsigned char>(c) < 0x80 && std::isspace(static_cast<unsigned char>(c))) {
            if (!in_ws) out.push_back(' ');
            in_ws = true;
        } else {
            out.push_back(c);
            in_ws = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string verb_lemma(std::string_view word) {
    std::string lw = to_lower(word);
    auto it = irregular_verbs().find(lw);
    if (it != irregular_verbs().end()) return std::string(it->second);
    if (s_exempt().count(lw)) return lw;

    std::size_t n = lw.size();
    if (n > 3 && lw.ends_with("ies")) return lw.substr(0, n - 3) + 'y';
    if (n > 4 && lw.ends_with("ing")) return strip_ing_ed(lw, 3);
    if (n > 3 && lw.ends_with("ied")) return lw.substr(0, n - 3) + 'y';
    if (n > 3 && lw.ends_with("ed") && !lw.ends_with("eed")) return strip_ing_ed(lw, 2);
    if (n > 3 && (lw.ends_with("ches") || lw.ends_with("shes") || lw.ends_with("sses") ||
                  lw.ends_with("xes") || lw.ends_with("zes") || lw.ends_with("oes")))
        return lw.substr(0, n - 2);
    if (n > 2 && lw.back() == 's' && lw[n - 2] != 's' && lw[n - 2] != 'u' && lw[n - 2] != 'i')
        return lw.substr(0, n - 1);
    return lw;
}

bool is_known_verb_base(std::string_view lower_word) { return verb_bases().count(lower_word) > 0; }

bool is_article_or_possessive(std::string_view w) {
    static const std::unordered_set<std::string_view> set = {
        "a", "an", "the", "his", "her", "its", "their", "my", "our", "your",
    };
    return set.count(w) > 0;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace favor::text
