//! Reference data for n <= 7: for each partition, the multidegree
//! `delta_1..delta_n` of the conormal variety, the hooks whose duals form the
//! dual variety, and the (special, generic) ED degrees. Partitions and hooks
//! are written as digit strings.

pub(crate) const ROWS: &[&str] = &[
    "2: 2,2; 2; 2,4",
    "3: 0,3,4; 21; 3,7",
    "21: 4,3,0; 3; 3,7",
    "4: 0,0,4,6; 211; 4,10",
    "31: 0,6,6,0; 31; 4,12",
    "211: 6,4,0,0; 4; 4,10",
    "22: 0,4,6,3; 4,4; 7,13",
    "5: 0,0,0,5,8; 2111; 5,13",
    "41: 0,0,8,9,0; 311; 5,17",
    "311: 0,9,8,0,0; 41; 5,17",
    "2111: 8,5,0,0,0; 5; 5,13",
    "221: 0,12,16,6,0; 5,5; 16,34",
    "32: 0,0,12,21,12; 41,5; 21,45",
    "6: 0,0,0,0,6,10; 21111; 6,16",
    "51: 0,0,0,10,12,0; 3111; 6,22",
    "411: 0,0,12,12,0,0; 411; 6,24",
    "3111: 0,12,10,0,0,0; 51; 6,22",
    "21111: 10,6,0,0,0,0; 6; 6,16",
    "2211: 0,24,30,10,0,0; 6,6; 28,64",
    "222: 0,0,8,16,12,4; 6,6,6; 20,40",
    "33: 0,0,0,9,18,12; 51,51; 19,39",
    "321: 0,0,36,56,24,0; 51,6; 44,116",
    "42: 0,0,0,16,30,18; 411,6; 26,64",
    "7: 0,0,0,0,0,7,12; 211111; 7,19",
    "61: 0,0,0,0,12,15,0; 31111; 7,27",
    "511: 0,0,0,15,16,0,0; 4111; 7,31",
    "4111: 0,0,16,15,0,0,0; 511; 7,31",
    "31111: 0,15,12,0,0,0,0; 61; 7,27",
    "211111: 12,7,0,0,0,0,0; 7; 7,19",
    "22111: 0,40,48,15,0,0,0; 7,7; 43,103",
    "2221: 0,0,32,60,40,10,0; 7,7,7; 62,142",
    "3211: 0,0,72,105,40,0,0; 61,7; 73,217",
    "322: 0,0,0,36,80,66,24; 61,7,7; 94,206",
    "331: 0,0,0,27,48,24,0; 61,61; 39,99",
    "421: 0,0,0,48,80,36,0; 511,7; 52,164",
    "43: 0,0,0,0,24,51,36; 511,61; 51,111",
    "52: 0,0,0,0,20,39,24; 4111,7; 31,83",
];
