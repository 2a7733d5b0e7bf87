"""Seeded synthetic informal/formal customer-service corpus.

Stands in for the real annotated tweets when they are not available: formal
sentences come from templates, informal versions are derived from them with
slang substitution, affix changes, particles, dropped punctuation, character
repetition and account mentions. Only the generator's statistics are
realistic; the sentences are not real tweets.
"""

from __future__ import annotations

import random
from pathlib import Path

from .corpus import PUBLISHED_SPLIT_SIZES, ParallelCorpus, save_official_split, split_corpus, write_monolingual

BRANDS = ["tokopedia", "shopee", "gojek", "grab", "ovo", "dana", "linkaja", "telkomsel", "indosat",
          "bca", "bri", "mandiri", "jne", "tiki", "lazada", "blibli", "bukalapak"]
ACCOUNTS = ["@TokopediaCare", "@ShopeeCare", "@gojekindonesia", "@GrabID", "@ovo_id", "@danawallet",
            "@telkomsel", "@indosatcare", "@HaloBCA", "@kontakBRI", "@mandiricare", "@JNECare",
            "@LazadaIDCare", "@BlibliCare", "@BukaBantuan"]
ITEMS = ["paket", "pesanan", "barang", "saldo", "pulsa", "kuota", "voucher", "tiket", "akun", "kartu",
         "dana", "refund", "promo", "poin", "tagihan"]
TIMES = ["kemarin", "tadi pagi", "tadi malam", "minggu lalu", "dua hari yang lalu", "semalam", "hari ini",
         "dari pagi", "sejak kemarin"]
ACTIONS = ["mengganti nomor telepon", "mengubah kata sandi", "membatalkan pesanan", "mengajukan refund",
           "mengaktifkan akun", "menghapus kartu", "menukar poin", "memesan tiket", "membeli pulsa",
           "mengirim pesan", "mengecek saldo", "melacak paket"]
PLACES = ["aplikasi", "website", "gerai", "kantor cabang", "menu bantuan"]

# (formal sentence template, weight); {X} slots are filled below
TEMPLATES = [
    "Admin, saya tidak bisa login ke aplikasi {brand} sejak {time}.",
    "Mengapa {item} saya belum sampai juga?",
    "Tolong bantu cek {item} saya, sudah {num} hari belum sampai.",
    "Bagaimana cara {action} di {place} {brand}?",
    "Saya sudah transfer tetapi {item} saya tidak bertambah.",
    "Apakah {item} ini masih berlaku?",
    "Terima kasih, admin.",
    "Terima kasih atas bantuannya, admin.",
    "Admin, saya mau {action}, bagaimana caranya?",
    "Mengapa aplikasi {brand} tidak bisa dibuka?",
    "Saya sudah menunggu {item} saya dari {time}, tetapi belum ada kabar.",
    "Tolong dibantu ya, admin, {item} saya hilang.",
    "Admin, saya sudah mengirim pesan, tolong dicek.",
    "Kapan {item} saya dikirim?",
    "Saya tidak bisa {action} di {place}.",
    "Mengapa saya tidak bisa {action}?",
    "Sudah saya coba berkali-kali tetapi tetap tidak bisa.",
    "Admin, {item} saya sudah dibayar tetapi statusnya belum berubah.",
    "Apakah bisa {action} lewat {place}?",
    "Saya mau tanya, {item} saya kapan sampai?",
    "Tolong segera diproses, saya sudah menunggu lama sekali.",
    "Mengapa {item} saya terpotong {num} kali?",
    "Admin, saya sudah mengirim pesan langsung, tolong dibalas.",
    "Bagaimana ini, {item} saya belum masuk juga?",
    "Saya kecewa sekali dengan layanan {brand}.",
    "Sudah {num} hari tetapi {item} saya belum dikembalikan.",
    "Admin, apakah {item} saya sudah diproses?",
    "Saya tidak mengerti mengapa {item} saya dibatalkan.",
    "Tolong jelaskan mengapa {item} saya belum sampai.",
    "Bagaimana kalau {item} saya tidak sampai hari ini?",
    "Saya sudah mencoba {action}, tetapi gagal terus.",
    "Admin, bisa dibantu untuk {action}?",
    "Apakah ada promo untuk pengguna baru?",
    "Saya tidak tahu harus bagaimana lagi.",
    "Mohon maaf, admin, saya mau bertanya.",
    "Kenapa {item} yang saya beli {time} belum dikirim?",
    "Sekarang saya harus bagaimana, admin?",
    "Tolong hubungi saya secepatnya.",
    "Saya sudah mengisi {item} {num} kali, tetapi tidak masuk.",
    "Admin, {place} {brand} sedang gangguan ya?",
]

# formal word -> informal variants (the formal form itself may be among them)
SLANG = {
    "saya": ["saya", "aku", "aku", "gw", "gue", "sy", "ak"],
    "tidak": ["ga", "gak", "nggak", "engga", "tdk", "gk", "ngga"],
    "sudah": ["udah", "udh", "sdh", "sudah", "dah"],
    "belum": ["blm", "belom", "belum", "blom"],
    "bagaimana": ["gimana", "gmn", "gmana", "bgmn"],
    "mengapa": ["kenapa", "knp", "kok", "napa"],
    "kenapa": ["kenapa", "knp", "napa"],
    "tolong": ["tlg", "tolong", "tolongin"],
    "admin": ["min", "min", "admin", "mimin", "kak"],
    "bisa": ["bisa", "bs", "bsa"],
    "sekali": ["banget", "bgt", "bngt"],
    "tetapi": ["tapi", "tp", "tpi"],
    "juga": ["jg", "juga"],
    "apakah": ["apa", "apakah", "apa"],
    "kapan": ["kapan", "kpn"],
    "sekarang": ["skrg", "sekarang", "skrang"],
    "yang": ["yg", "yang"],
    "dengan": ["dgn", "sama", "dengan"],
    "untuk": ["buat", "utk", "untuk"],
    "mau": ["mau", "mo", "pengen"],
    "tanya": ["nanya", "tanya"],
    "bertanya": ["nanya", "tanya"],
    "ada": ["ada", "ad"],
    "hari": ["hari", "hr"],
    "sampai": ["sampe", "nyampe", "sampai"],
    "menunggu": ["nunggu", "nungguin"],
    "mengirim": ["ngirim", "kirim"],
    "mencoba": ["nyoba", "coba"],
    "coba": ["coba", "cb"],
    "dibantu": ["dibantu", "bantu"],
    "bantu": ["bantu", "bantuin"],
    "dicek": ["dicek", "cek", "dicekin"],
    "cek": ["cek", "cekin"],
    "tahu": ["tau", "tw"],
    "mengerti": ["ngerti", "paham"],
    "lagi": ["lagi", "lg"],
    "lama": ["lama", "lma"],
    "terus": ["terus", "trs", "mulu"],
    "kalau": ["kalo", "klo", "kl"],
    "masih": ["masih", "msh"],
    "harus": ["hrs", "harus"],
    "dari": ["dari", "dr"],
    "sejak": ["dari", "dr"],
    "kemarin": ["kemaren", "kmrn", "kemarin"],
    "semalam": ["semalem", "smlm"],
    "berkali-kali": ["berkali2", "berkali-kali", "berkali kali"],
    "segera": ["segera", "cepet"],
    "secepatnya": ["secepatnya", "asap", "cepetan"],
    "sedang": ["lagi", "lg", "sedang"],
    "kecewa": ["kecewa", "kcewa"],
    "gagal": ["gagal", "gagal"],
    "langsung": ["langsung", "lgsg"],
    "pesan": ["pesan", "chat"],
    "hubungi": ["hubungi", "kontak"],
    "mohon": ["mohon", "plis"],
    "maaf": ["maaf", "maap", "sorry"],
    "beli": ["beli", "bli"],
    "mengganti": ["ganti", "gnti"],
    "mengubah": ["ubah", "ganti"],
    "membatalkan": ["batalin", "cancel"],
    "mengajukan": ["ngajuin", "ajukan"],
    "mengaktifkan": ["aktifin", "aktifkan"],
    "menghapus": ["hapus", "apus"],
    "menukar": ["nuker", "tuker"],
    "memesan": ["mesen", "pesen"],
    "membeli": ["beli", "bli"],
    "mengecek": ["ngecek", "cek"],
    "melacak": ["lacak", "ngelacak"],
    "mengisi": ["ngisi", "isi"],
    "dibayar": ["dibayar", "dibyr"],
    "dibalas": ["dibales", "bales"],
    "dikirim": ["dikirim", "dikrim"],
    "kata": ["kata", "kt"],
    "sandi": ["sandi", "sandi"],
    "nomor": ["nomor", "no", "nmr"],
    "telepon": ["hp", "telp"],
    "pagi": ["pagi", "pgi"],
    "malam": ["malem", "mlm"],
    "baru": ["baru", "br"],
    "lalu": ["lalu", "lalu"],
    "kabar": ["kabar", "kbr"],
    "caranya": ["caranya", "gmn caranya"],
    "cara": ["cara", "cr"],
    "berlaku": ["berlaku", "bisa dipake"],
    "lewat": ["lewat", "via"],
    "hilang": ["ilang", "hilang"],
    "dua": ["2", "dua"],
    "layanan": ["layanan", "pelayanan"],
    "statusnya": ["statusnya", "status nya"],
    "dikembalikan": ["dibalikin", "dikembaliin"],
    "diproses": ["diproses", "diproses"],
    "dibatalkan": ["dibatalin", "dicancel"],
    "jelaskan": ["jelasin", "jelasin dong"],
    "pengguna": ["pengguna", "user"],
    "bertambah": ["nambah", "bertambah"],
    "terpotong": ["kepotong", "terpotong"],
    "masuk": ["masuk", "msk"],
    "gangguan": ["gangguan", "error"],
    "dibuka": ["dibuka", "dibuka"],
    "ini": ["ini", "ni"],
}

# multi-word formal phrases with informal renderings
PHRASES = {
    ("terima", "kasih"): ["makasih", "mksh", "thx", "trims", "terima kasih", "makasi"],
    ("tidak", "ada"): ["gada", "ga ada", "gak ada"],
    ("tidak", "bisa"): ["gabisa", "ga bisa", "gak bisa", "gk bs", "nggak bisa"],
    ("atas", "bantuannya"): ["bantuannya", "atas bantuannya"],
    ("harus", "bagaimana"): ["hrs gmn", "harus gimana"],
}

PARTICLES = ["ya", "sih", "dong", "nih", "deh", "kak", "min", "ya min", "dong min"]

# words whose informal variants the demo dictionary knows about, with the formal target
DICT_COVERAGE = 0.7


def _fill(template: str, rng: random.Random) -> str:
    slots = {
        "brand": lambda: rng.choice(BRANDS),
        "item": lambda: rng.choice(ITEMS),
        "time": lambda: rng.choice(TIMES),
        "action": lambda: rng.choice(ACTIONS),
        "place": lambda: rng.choice(PLACES),
        "num": lambda: str(rng.choice([2, 3, 4, 5, 7, 10, 14])),
    }
    out = template
    for name, fn in slots.items():
        while "{" + name + "}" in out:
            out = out.replace("{" + name + "}", fn(), 1)
    return out


def formal_sentence(rng: random.Random) -> str:
    s = _fill(rng.choice(TEMPLATES), rng)
    return s[0].upper() + s[1:]


def _split_punct(sentence: str) -> list[str]:
    toks = []
    for w in sentence.split():
        trail = []
        while w and w[-1] in ".,?!":
            trail.append(w[-1])
            w = w[:-1]
        if w:
            toks.append(w)
        toks.extend(reversed(trail))
    return toks


def informalize(formal: str, rng: random.Random, slang_rate: float = 0.55) -> str:
    toks = _split_punct(formal.lower())
    out: list[str] = []
    i = 0
    while i < len(toks):
        two = tuple(toks[i:i + 2])
        if len(two) == 2 and two in PHRASES and rng.random() < slang_rate:
            out.append(rng.choice(PHRASES[two]))
            i += 2
            continue
        t = toks[i]
        if t in ".,":
            if rng.random() < 0.6:
                i += 1
                continue
        elif t == "?":
            if rng.random() < 0.3:
                i += 1
                continue
        elif t in SLANG and rng.random() < slang_rate:
            t = rng.choice(SLANG[t])
        out.append(t)
        i += 1

    if rng.random() < 0.35:
        # particle before the final punctuation, if any
        pos = len(out) - 1 if out and out[-1] in ("?", "!", ".") else len(out)
        out.insert(pos, rng.choice(PARTICLES))
    if rng.random() < 0.15:
        j = rng.randrange(len(out))
        w = out[j]
        if w.isalpha():
            out[j] = w + w[-1] * rng.randint(2, 4)
    if rng.random() < 0.08:
        out.append(rng.choice(["!!!", "??", "???"]))
    if rng.random() < 0.2:
        out.insert(0, rng.choice(ACCOUNTS))
    text = " ".join(out)
    return text.replace(" ?", "?").replace(" ,", ",").replace(" .", ".").replace(" !", "!")


def make_parallel(n: int = sum(PUBLISHED_SPLIT_SIZES), seed: int = 0) -> list[tuple[str, str]]:
    rng = random.Random(seed)
    pairs = []
    seen = set()
    while len(pairs) < n:
        f = formal_sentence(rng)
        i = informalize(f, rng)
        if (i, f) in seen:
            continue
        seen.add((i, f))
        pairs.append((i, f))
    return pairs


def make_monolingual(n: int = 5000, seed: int = 1) -> list[str]:
    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < n:
        s = informalize(formal_sentence(rng), rng)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def make_dictionary(seed: int = 2, coverage: float = DICT_COVERAGE) -> dict[str, str]:
    """Informal -> formal entries for a random share of the slang variants."""
    rng = random.Random(seed)
    entries: dict[str, str] = {}
    for formal, variants in SLANG.items():
        for v in variants:
            if " " in v or v == formal or v in entries:
                continue
            if rng.random() < coverage:
                entries[v] = formal
    for words, variants in PHRASES.items():
        for v in variants:
            if " " not in v and v not in entries and rng.random() < coverage:
                entries[v] = " ".join(words)
    return dict(sorted(entries.items()))


def make_corpus(seed: int = 0, sizes=PUBLISHED_SPLIT_SIZES) -> ParallelCorpus:
    return split_corpus(make_parallel(sum(sizes), seed), sizes, seed)


def write_demo_data(directory: str | Path, seed: int = 0, mono_size: int = 5000) -> Path:
    """Write ``{train,dev,test}.{inf,for}``, ``mono.txt`` and ``dictionary.tsv`` under ``directory``."""
    d = Path(directory)
    save_official_split(make_corpus(seed), d)
    write_monolingual(make_monolingual(mono_size, seed + 1), d / "mono.txt")
    with open(d / "dictionary.tsv", "w", encoding="utf-8", newline="\n") as f:
        for k, v in make_dictionary(seed + 2).items():
            f.write(f"{k}\t{v}\n")
    return d
